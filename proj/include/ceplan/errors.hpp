// Copyright 2026 The ceplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ceplan {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A position or cell lies outside the grid.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// The same (vehicle, trajectory) pair was inserted twice.
class DuplicateTrajectoryError : public Error {
 public:
  using Error::Error;
};

/// No grid path connects start and goal.
class UnreachableError : public Error {
 public:
  using Error::Error;
};

/// A trajectory is too short for the requested statistic.
class DegenerateTrajectoryError : public Error {
 public:
  using Error::Error;
};

/// Consecutive coarse trajectory cells are not adjacent.
class CorridorError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside a trajectory's time domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (scenario file, solver parameters, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A linear system came out numerically unusable.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

}  // namespace ceplan

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

#include <Eigen/Dense>
#include <vector>

#include "ceplan/grid.hpp"

namespace ceplan {

/// Ordered spatial cells from start to goal; consecutive entries are
/// 4-neighbors (or identical, for externally supplied dwell paths).
using GridPath = std::vector<Eigen::Vector2i>;

/// Shortest 4-connected path on the grid, Manhattan heuristic.
/// Cost is the number of cells in the path. Deterministic: ties are broken
/// by smaller heuristic, then by insertion order.
GridPath astar(const Eigen::Vector2i& start, const Eigen::Vector2i& goal,
               const SpatialSet& obstacles, const GridSpec& spec);

/// Index of the path cell whose center is nearest to `position`.
/// Ties go to the larger index (forward progress).
int project_onto_path(const Eigen::Vector2d& position, const GridPath& path,
                      const GridSpec& spec);

}  // namespace ceplan

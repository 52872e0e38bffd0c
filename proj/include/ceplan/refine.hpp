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

// Minimum-jerk refinement: one degree-7 polynomial per corridor segment and
// per axis, minimizing the integral of squared jerk subject to boundary
// conditions, C3 continuity at junctions and containment in the corridor
// rectangles at a fixed set of sample times.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ceplan/corridor.hpp"
#include "ceplan/errors.hpp"

namespace ceplan {

inline constexpr int kPolynomialDegree = 7;
inline constexpr int kPolynomialCoeffs = kPolynomialDegree + 1;

/// One polynomial piece. Coefficients are stored in normalized local time
/// sigma = tau / duration, one column per planar axis; derivatives in real
/// time divide by duration^order.
struct PolynomialSegment {
  Eigen::Matrix<double, kPolynomialCoeffs, 2> coeffs;
  double duration = 0.0;

  Eigen::Vector2d evaluate_local(double tau, int order) const;
};

/// Piecewise-polynomial planar trajectory over consecutive segments.
struct PiecewiseTrajectory {
  std::vector<PolynomialSegment> segments;

  double total_duration() const;

  /// order-th derivative (order 0..3) at absolute time t. Segment lookup is
  /// left-closed at junctions; t must lie in [0, total_duration].
  Eigen::Vector2d evaluate(double t, int order) const;
};

struct BoundaryState {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  Eigen::Vector2d acceleration = Eigen::Vector2d::Zero();
};

/// Terminal condition: position always pinned, velocity/acceleration only
/// when present.
struct EndCondition {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  std::optional<Eigen::Vector2d> velocity;
  std::optional<Eigen::Vector2d> acceleration;
};

struct QPResult {
  PiecewiseTrajectory trajectory;
  double objective = 0.0;       // total squared-jerk integral, both axes
  bool feasible = false;        // solved and violations within 1e-6
  double max_violation = 0.0;   // worst sampled containment violation
  int iterations = 0;
};

/// Position equality at an interior time; the receding-horizon loop pins
/// the executed steps to their cell centers so execution honors the grid
/// reservation exactly.
struct TimedPosition {
  double time = 0.0;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
};

/// Solves the corridor-constrained minimum-jerk problem. Containment is
/// enforced at `samples_per_segment` uniformly spaced times per segment
/// (endpoints included). The two axes decouple and are solved as separate
/// QPs.
QPResult refine_trajectory(const Corridor& corridor, const BoundaryState& start,
                           const EndCondition& end, int samples_per_segment = 20,
                           const std::vector<TimedPosition>& pins = {});

}  // namespace ceplan

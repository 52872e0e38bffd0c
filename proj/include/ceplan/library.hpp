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

#include <vector>

#include "ceplan/grid.hpp"
#include "ceplan/path.hpp"

namespace ceplan {

/// A vehicle's coarse trajectory alternatives over one planning horizon.
/// All trajectories start from the same path index.
struct TrajectoryLibrary {
  int vehicle_id = 0;
  int start_index = 0;
  std::vector<CoarseTrajectory> trajectories;

  int size() const { return static_cast<int>(trajectories.size()); }
};

/// Enumerates every horizon-length trajectory that walks the path forward
/// from index `start_index`, dwelling between 1 and `max_stay` steps per
/// path point. Near the path end the goal cell is virtually repeated, so
/// trajectories may finish by waiting at the goal (that final dwell is
/// exempt from the max-stay bound).
///
/// The result is duplicate-free and its order is deterministic.
TrajectoryLibrary generate_trajectory_library(const GridPath& path, int horizon_steps,
                                              int max_stay, int start_index,
                                              int vehicle_id = 0);

struct TrajectoryStats {
  double arc_length = 0.0;  // meters, sum of center-to-center distances
  double avg_accel = 0.0;   // m/s^2, mean second-difference magnitude
};

/// Arc length and average acceleration of a coarse trajectory. Length needs
/// at least 2 points; acceleration is 0 when there are no interior points.
TrajectoryStats trajectory_stats(const CoarseTrajectory& trajectory,
                                 const GridSpec& spec);

/// Stats for every trajectory in a library.
std::vector<TrajectoryStats> library_stats(const TrajectoryLibrary& library,
                                           const GridSpec& spec);

}  // namespace ceplan

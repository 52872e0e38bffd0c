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

#include "ceplan/library.hpp"

#include <functional>
#include <string>
#include <unordered_map>

namespace ceplan {

namespace {

std::uint64_t trajectory_hash(const CoarseTrajectory& traj) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& c : traj) {
    h = (h ^ spatial_key(c.x(), c.y())) * 1099511628211ULL;
  }
  return h;
}

}  // namespace

TrajectoryLibrary generate_trajectory_library(const GridPath& path, int horizon_steps,
                                              int max_stay, int start_index,
                                              int vehicle_id) {
  if (path.empty())
    throw std::invalid_argument("generate_trajectory_library: empty path");
  if (horizon_steps < 1 || max_stay < 1)
    throw std::invalid_argument(
        "generate_trajectory_library: horizon and max stay must be >= 1");
  if (start_index < 0 || start_index >= static_cast<int>(path.size()))
    throw std::invalid_argument(
        "generate_trajectory_library: start index outside path");

  TrajectoryLibrary library;
  library.vehicle_id = vehicle_id;
  library.start_index = start_index;

  const int last = static_cast<int>(path.size()) - 1;
  CoarseTrajectory current;
  current.reserve(horizon_steps);

  // Duplicates can only arise when the input path itself repeats cells.
  std::unordered_map<std::uint64_t, std::vector<int>> seen;
  const auto same = [](const CoarseTrajectory& a, const CoarseTrajectory& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].x() != b[i].x() || a[i].y() != b[i].y()) return false;
    return true;
  };
  const auto emit = [&]() {
    auto& bucket = seen[trajectory_hash(current)];
    for (const int idx : bucket)
      if (same(library.trajectories[idx], current)) return;
    bucket.push_back(library.size());
    library.trajectories.push_back(current);
  };

  std::function<void(int, int)> expand = [&](int index, int remaining) {
    if (index == last) {
      // Path end: pad by waiting at the goal for all remaining steps.
      for (int i = 0; i < remaining; ++i) current.push_back(path[index]);
      emit();
      for (int i = 0; i < remaining; ++i) current.pop_back();
      return;
    }
    const int max_dwell = std::min(max_stay, remaining);
    for (int dwell = 1; dwell <= max_dwell; ++dwell) {
      for (int i = 0; i < dwell; ++i) current.push_back(path[index]);
      if (dwell == remaining) {
        emit();
      } else {
        expand(index + 1, remaining - dwell);
      }
      for (int i = 0; i < dwell; ++i) current.pop_back();
    }
  };

  expand(start_index, horizon_steps);
  return library;
}

TrajectoryStats trajectory_stats(const CoarseTrajectory& trajectory,
                                 const GridSpec& spec) {
  const int n = static_cast<int>(trajectory.size());
  if (n < 2)
    throw DegenerateTrajectoryError("trajectory_stats: need at least 2 points, got " +
                                    std::to_string(n));
  TrajectoryStats stats;
  for (int k = 0; k + 1 < n; ++k) {
    stats.arc_length +=
        (cell_center(trajectory[k + 1], spec) - cell_center(trajectory[k], spec)).norm();
  }
  if (n >= 3) {
    const double dt2 = spec.temporal_resolution * spec.temporal_resolution;
    double sum = 0.0;
    for (int k = 1; k + 1 < n; ++k) {
      const Eigen::Vector2d second_diff = cell_center(trajectory[k + 1], spec) -
                                          2.0 * cell_center(trajectory[k], spec) +
                                          cell_center(trajectory[k - 1], spec);
      sum += second_diff.norm() / dt2;
    }
    stats.avg_accel = sum / static_cast<double>(n - 2);
  }
  return stats;
}

std::vector<TrajectoryStats> library_stats(const TrajectoryLibrary& library,
                                           const GridSpec& spec) {
  std::vector<TrajectoryStats> stats;
  stats.reserve(library.trajectories.size());
  for (const auto& traj : library.trajectories) stats.push_back(trajectory_stats(traj, spec));
  return stats;
}

}  // namespace ceplan

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

#include "ceplan/corridor.hpp"

#include <cmath>
#include <string>

#include "ceplan/rng.hpp"

namespace ceplan {

double Corridor::total_duration() const {
  double total = 0.0;
  for (const auto& segment : segments) total += segment.duration;
  return total;
}

int sample_trajectory_index(const PreferenceDistribution& probabilities,
                            std::mt19937_64& rng) {
  if (probabilities.size() < 1)
    throw std::invalid_argument("sample_trajectory_index: empty distribution");
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (int n = 0; n < probabilities.size(); ++n) {
    cumulative += probabilities[n];
    if (u < cumulative) return n;
  }
  return static_cast<int>(probabilities.size()) - 1;  // u >= fp sum
}

const CoarseTrajectory& sample_trajectory(const PreferenceDistribution& probabilities,
                                          const TrajectoryLibrary& library,
                                          std::mt19937_64& rng) {
  if (library.size() != probabilities.size())
    throw std::invalid_argument("sample_trajectory: distribution/library mismatch");
  return library.trajectories[sample_trajectory_index(probabilities, rng)];
}

Corridor build_corridor(const CoarseTrajectory& trajectory, const GridSpec& spec) {
  const int n = static_cast<int>(trajectory.size());
  if (n < 2) throw std::invalid_argument("build_corridor: need at least 2 points");

  const double dt = spec.temporal_resolution;
  Corridor corridor;
  double pending_wait = 0.0;  // waits seen before the first move

  for (int k = 0; k + 1 < n; ++k) {
    const Eigen::Vector2i& a = trajectory[k];
    const Eigen::Vector2i& b = trajectory[k + 1];
    const int gap = std::abs(a.x() - b.x()) + std::abs(a.y() - b.y());
    if (gap == 0) {
      if (corridor.segments.empty()) {
        pending_wait += dt;
      } else {
        corridor.segments.back().duration += dt;
      }
      continue;
    }
    if (gap > 1) {
      throw CorridorError("build_corridor: cells (" + std::to_string(a.x()) + "," +
                          std::to_string(a.y()) + ") and (" + std::to_string(b.x()) +
                          "," + std::to_string(b.y()) + ") are not adjacent");
    }
    CorridorSegment segment;
    segment.box = cell_bounds(a, spec).merged(cell_bounds(b, spec));
    segment.duration = dt + pending_wait;
    segment.entry_cell = a;
    segment.exit_cell = b;
    pending_wait = 0.0;
    corridor.segments.push_back(segment);
  }

  if (corridor.segments.empty()) {
    // The vehicle never moves: a single cell-sized segment spans the horizon.
    CorridorSegment segment;
    segment.box = cell_bounds(trajectory.front(), spec);
    segment.duration = pending_wait;
    segment.entry_cell = trajectory.front();
    segment.exit_cell = trajectory.front();
    corridor.segments.push_back(segment);
  }
  return corridor;
}

void corridor_halfspaces(const CorridorSegment& segment,
                         Eigen::Matrix<double, 4, 2>& A, Eigen::Vector4d& b) {
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  b << segment.box.max().x(), -segment.box.min().x(), segment.box.max().y(),
      -segment.box.min().y();
}

}  // namespace ceplan

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
#include <Eigen/Geometry>
#include <random>
#include <vector>

#include "ceplan/grid.hpp"
#include "ceplan/library.hpp"
#include "ceplan/preference.hpp"

namespace ceplan {

/// One free-space rectangle of the safety corridor with the time budget the
/// refined trajectory spends inside it.
struct CorridorSegment {
  Eigen::AlignedBox2d box;      // meters
  double duration = 0.0;        // seconds, integer multiple of the time step
  Eigen::Vector2i entry_cell;
  Eigen::Vector2i exit_cell;
};

/// Time-ordered overlapping rectangles covering a coarse trajectory.
struct Corridor {
  std::vector<CorridorSegment> segments;

  int size() const { return static_cast<int>(segments.size()); }
  double total_duration() const;
};

/// Draws a trajectory index by inverse CDF over the distribution.
/// Deterministic given the generator state.
int sample_trajectory_index(const PreferenceDistribution& probabilities,
                            std::mt19937_64& rng);

/// Samples a trajectory from a library under the recommended distribution.
const CoarseTrajectory& sample_trajectory(const PreferenceDistribution& probabilities,
                                          const TrajectoryLibrary& library,
                                          std::mt19937_64& rng);

/// Builds the safety corridor of a coarse trajectory: one rectangle per
/// move (the union of the two cells), one time step each. Runs of repeated
/// cells extend the preceding segment's duration (the following segment's
/// when the trajectory starts with a wait), so the corridor always spans
/// the trajectory's full (N-1) * dt time budget. An all-wait trajectory
/// yields a single one-cell segment.
Corridor build_corridor(const CoarseTrajectory& trajectory, const GridSpec& spec);

/// Half-space form A x <= b of a segment's rectangle: exactly 4 rows with
/// axis-aligned normals (+x, -x, +y, -y).
void corridor_halfspaces(const CorridorSegment& segment,
                         Eigen::Matrix<double, 4, 2>& A, Eigen::Vector4d& b);

}  // namespace ceplan

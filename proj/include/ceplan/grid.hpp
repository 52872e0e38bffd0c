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
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ceplan/errors.hpp"

namespace ceplan {

/// Discretization of planar space and time. Cells use the half-open
/// convention [x*res, (x+1)*res), so every in-bounds point maps to exactly
/// one cell.
struct GridSpec {
  double spatial_resolution = 0.3;   // meters per cell
  double temporal_resolution = 0.6;  // seconds per time step
  int width = 1;                     // cells along x
  int height = 1;                    // cells along y
  int horizon = 1;                   // time steps

  void validate() const;
};

/// One spatial-temporal cell: spatial indices plus a time index.
struct Cell {
  int x = 0;
  int y = 0;
  int t = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Spatial cells visited over the planning horizon, one per time step.
using CoarseTrajectory = std::vector<Eigen::Vector2i>;

inline std::uint64_t spatial_key(int x, int y) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(y));
}

// Packs (x, y, t) into one key; valid for indices below 2^21 (x, y) and
// 2^22 (t), far beyond any grid this library handles.
inline std::uint64_t cell_key(const Cell& c) {
  return (static_cast<std::uint64_t>(c.t & 0x3FFFFF) << 42) |
         (static_cast<std::uint64_t>(c.y & 0x1FFFFF) << 21) |
         static_cast<std::uint64_t>(c.x & 0x1FFFFF);
}

/// Set of spatial cells (obstacles, visited markers, ...).
class SpatialSet {
 public:
  SpatialSet() = default;
  explicit SpatialSet(const std::vector<Eigen::Vector2i>& cells) {
    for (const auto& c : cells) insert(c);
  }

  void insert(const Eigen::Vector2i& c) { keys_.insert(spatial_key(c.x(), c.y())); }
  bool contains(const Eigen::Vector2i& c) const {
    return keys_.count(spatial_key(c.x(), c.y())) > 0;
  }
  std::size_t size() const { return keys_.size(); }

 private:
  std::unordered_set<std::uint64_t> keys_;
};

bool in_bounds(const Eigen::Vector2i& cell, const GridSpec& spec);
bool in_bounds(const Cell& cell, const GridSpec& spec);

/// Maps a planar point in meters to its spatial cell indices.
Eigen::Vector2i world_to_cell(const Eigen::Vector2d& position, const GridSpec& spec);

/// Axis-aligned extent of a spatial cell in meters.
Eigen::AlignedBox2d cell_bounds(const Eigen::Vector2i& cell, const GridSpec& spec);

/// Center of a spatial cell in meters.
Eigen::Vector2d cell_center(const Eigen::Vector2i& cell, const GridSpec& spec);

/// Occupancy index over the spatial-temporal grid: each cell maps to the set
/// of (vehicle id, trajectory index) pairs whose trajectory visits it.
class OccupancyIndex {
 public:
  struct Occupant {
    int vehicle_id = 0;
    int trajectory_index = 0;
    friend bool operator==(const Occupant&, const Occupant&) = default;
  };

  explicit OccupancyIndex(const GridSpec& spec) : spec_(spec) {}

  /// Registers every (cell, time) of the trajectory. The trajectory must
  /// span exactly the grid horizon and stay in bounds. Re-inserting the
  /// same (vehicle, trajectory) pair is an error.
  void insert_trajectory(int vehicle_id, int trajectory_index,
                         const CoarseTrajectory& trajectory);

  /// Occupants of one spatial-temporal cell (empty if none).
  const std::vector<Occupant>& occupants(const Cell& cell) const;

  /// Total keyed memberships, i.e. sum of trajectory lengths inserted.
  std::size_t entry_count() const { return entries_; }

  const GridSpec& spec() const { return spec_; }

  /// Iteration over all occupied cells, used by risk-point localization.
  const std::unordered_map<std::uint64_t, std::vector<Occupant>>& cells() const {
    return map_;
  }

  static Cell key_to_cell(std::uint64_t key);

 private:
  GridSpec spec_;
  std::unordered_map<std::uint64_t, std::vector<Occupant>> map_;
  std::unordered_set<std::uint64_t> inserted_;  // (vehicle, trajectory) pairs
  std::size_t entries_ = 0;
  static const std::vector<Occupant> kEmpty;
};

}  // namespace ceplan

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

#include "ceplan/grid.hpp"

#include <cmath>
#include <string>

namespace ceplan {

const std::vector<OccupancyIndex::Occupant> OccupancyIndex::kEmpty{};

void GridSpec::validate() const {
  if (!(spatial_resolution > 0.0))
    throw ConfigError("GridSpec: spatial_resolution must be positive");
  if (!(temporal_resolution > 0.0))
    throw ConfigError("GridSpec: temporal_resolution must be positive");
  if (width < 1 || height < 1 || horizon < 1)
    throw ConfigError("GridSpec: width, height and horizon must be >= 1");
}

bool in_bounds(const Eigen::Vector2i& cell, const GridSpec& spec) {
  return cell.x() >= 0 && cell.x() < spec.width && cell.y() >= 0 &&
         cell.y() < spec.height;
}

bool in_bounds(const Cell& cell, const GridSpec& spec) {
  return in_bounds(Eigen::Vector2i(cell.x, cell.y), spec) && cell.t >= 0 &&
         cell.t < spec.horizon;
}

Eigen::Vector2i world_to_cell(const Eigen::Vector2d& position, const GridSpec& spec) {
  const Eigen::Vector2i cell(
      static_cast<int>(std::floor(position.x() / spec.spatial_resolution)),
      static_cast<int>(std::floor(position.y() / spec.spatial_resolution)));
  if (!in_bounds(cell, spec)) {
    throw BoundsError("world_to_cell: position (" + std::to_string(position.x()) +
                      ", " + std::to_string(position.y()) + ") outside grid");
  }
  return cell;
}

Eigen::AlignedBox2d cell_bounds(const Eigen::Vector2i& cell, const GridSpec& spec) {
  if (!in_bounds(cell, spec)) {
    throw BoundsError("cell_bounds: cell (" + std::to_string(cell.x()) + ", " +
                      std::to_string(cell.y()) + ") outside grid");
  }
  const double res = spec.spatial_resolution;
  return Eigen::AlignedBox2d(Eigen::Vector2d(cell.x() * res, cell.y() * res),
                             Eigen::Vector2d((cell.x() + 1) * res, (cell.y() + 1) * res));
}

Eigen::Vector2d cell_center(const Eigen::Vector2i& cell, const GridSpec& spec) {
  const double res = spec.spatial_resolution;
  return Eigen::Vector2d((cell.x() + 0.5) * res, (cell.y() + 0.5) * res);
}

void OccupancyIndex::insert_trajectory(int vehicle_id, int trajectory_index,
                                       const CoarseTrajectory& trajectory) {
  if (static_cast<int>(trajectory.size()) != spec_.horizon) {
    throw std::invalid_argument(
        "insert_trajectory: trajectory length " + std::to_string(trajectory.size()) +
        " does not match grid horizon " + std::to_string(spec_.horizon));
  }
  const std::uint64_t pair_key =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(vehicle_id)) << 32) |
      static_cast<std::uint64_t>(static_cast<std::uint32_t>(trajectory_index));
  if (inserted_.count(pair_key) > 0) {
    throw DuplicateTrajectoryError("insert_trajectory: vehicle " +
                                   std::to_string(vehicle_id) + " trajectory " +
                                   std::to_string(trajectory_index) +
                                   " already inserted");
  }
  for (int t = 0; t < spec_.horizon; ++t) {
    const Cell cell{trajectory[t].x(), trajectory[t].y(), t};
    if (!in_bounds(cell, spec_)) {
      throw BoundsError("insert_trajectory: cell (" + std::to_string(cell.x) + ", " +
                        std::to_string(cell.y) + ", t=" + std::to_string(cell.t) +
                        ") outside grid");
    }
  }
  inserted_.insert(pair_key);
  for (int t = 0; t < spec_.horizon; ++t) {
    const Cell cell{trajectory[t].x(), trajectory[t].y(), t};
    map_[cell_key(cell)].push_back(Occupant{vehicle_id, trajectory_index});
    ++entries_;
  }
}

const std::vector<OccupancyIndex::Occupant>& OccupancyIndex::occupants(
    const Cell& cell) const {
  const auto it = map_.find(cell_key(cell));
  return it == map_.end() ? kEmpty : it->second;
}

Cell OccupancyIndex::key_to_cell(std::uint64_t key) {
  Cell c;
  c.x = static_cast<int>(key & 0x1FFFFF);
  c.y = static_cast<int>((key >> 21) & 0x1FFFFF);
  c.t = static_cast<int>((key >> 42) & 0x3FFFFF);
  return c;
}

}  // namespace ceplan

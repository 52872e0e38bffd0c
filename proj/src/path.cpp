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

#include "ceplan/path.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <unordered_map>

namespace ceplan {

namespace {

int manhattan(const Eigen::Vector2i& a, const Eigen::Vector2i& b) {
  return std::abs(a.x() - b.x()) + std::abs(a.y() - b.y());
}

struct QueueEntry {
  int f = 0;
  int h = 0;
  std::int64_t order = 0;  // insertion counter, final tie-break
  std::uint64_t key = 0;

  bool operator>(const QueueEntry& other) const {
    if (f != other.f) return f > other.f;
    if (h != other.h) return h > other.h;
    return order > other.order;
  }
};

}  // namespace

GridPath astar(const Eigen::Vector2i& start, const Eigen::Vector2i& goal,
               const SpatialSet& obstacles, const GridSpec& spec) {
  if (!in_bounds(start, spec) || !in_bounds(goal, spec))
    throw BoundsError("astar: start or goal outside grid");
  if (obstacles.contains(start) || obstacles.contains(goal))
    throw std::invalid_argument("astar: start or goal is an obstacle");

  if (start == goal) return {start};

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  std::unordered_map<std::uint64_t, int> best_g;
  std::unordered_map<std::uint64_t, std::uint64_t> came_from;

  const auto key_of = [](const Eigen::Vector2i& c) { return spatial_key(c.x(), c.y()); };
  const auto cell_of = [](std::uint64_t k) {
    return Eigen::Vector2i(static_cast<int>(k >> 32), static_cast<int>(k & 0xFFFFFFFFu));
  };

  std::int64_t counter = 0;
  best_g[key_of(start)] = 0;
  open.push(QueueEntry{manhattan(start, goal), manhattan(start, goal), counter++,
                       key_of(start)});

  const Eigen::Vector2i moves[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    const Eigen::Vector2i current = cell_of(top.key);
    const int g = best_g.at(top.key);
    if (top.f != g + manhattan(current, goal)) continue;  // stale entry

    if (current == goal) {
      GridPath path{current};
      std::uint64_t k = top.key;
      while (came_from.count(k) > 0) {
        k = came_from.at(k);
        path.push_back(cell_of(k));
      }
      std::reverse(path.begin(), path.end());
      return path;
    }

    for (const auto& move : moves) {
      const Eigen::Vector2i next = current + move;
      if (!in_bounds(next, spec) || obstacles.contains(next)) continue;
      const std::uint64_t nk = key_of(next);
      const int ng = g + 1;
      const auto it = best_g.find(nk);
      if (it != best_g.end() && it->second <= ng) continue;
      best_g[nk] = ng;
      came_from[nk] = top.key;
      const int h = manhattan(next, goal);
      open.push(QueueEntry{ng + h, h, counter++, nk});
    }
  }
  throw UnreachableError("astar: no path from (" + std::to_string(start.x()) + "," +
                         std::to_string(start.y()) + ") to (" +
                         std::to_string(goal.x()) + "," + std::to_string(goal.y()) +
                         ")");
}

int project_onto_path(const Eigen::Vector2d& position, const GridPath& path,
                      const GridSpec& spec) {
  if (path.empty()) throw std::invalid_argument("project_onto_path: empty path");
  int best = 0;
  double best_d2 = (position - cell_center(path[0], spec)).squaredNorm();
  for (int i = 1; i < static_cast<int>(path.size()); ++i) {
    const double d2 = (position - cell_center(path[i], spec)).squaredNorm();
    if (d2 <= best_d2) {  // <= : ties prefer the larger index
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

}  // namespace ceplan

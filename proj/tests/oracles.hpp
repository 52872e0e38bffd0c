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

// Test-only reference implementations, intentionally independent of the
// library code paths they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "ceplan/coordinator.hpp"
#include "ceplan/grid.hpp"
#include "ceplan/library.hpp"

namespace oracles {

// Breadth-first shortest path length in cells, or nullopt if unreachable.
inline std::optional<int> bfs_path_cells(const Eigen::Vector2i& start,
                                         const Eigen::Vector2i& goal,
                                         const ceplan::SpatialSet& obstacles,
                                         const ceplan::GridSpec& spec) {
  if (start == goal) return 1;
  std::map<std::pair<int, int>, int> dist;
  std::deque<Eigen::Vector2i> queue{start};
  dist[{start.x(), start.y()}] = 1;
  const Eigen::Vector2i moves[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!queue.empty()) {
    const Eigen::Vector2i current = queue.front();
    queue.pop_front();
    const int d = dist.at({current.x(), current.y()});
    for (const auto& move : moves) {
      const Eigen::Vector2i next = current + move;
      if (!ceplan::in_bounds(next, spec) || obstacles.contains(next)) continue;
      if (dist.count({next.x(), next.y()}) > 0) continue;
      dist[{next.x(), next.y()}] = d + 1;
      if (next == goal) return d + 1;
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

// Exhaustive enumeration of valid dwell trajectories: walk the path forward
// from `start`, repeating each cell, never exceeding `max_stay` consecutive
// visits except while parked on the final path cell.
inline std::vector<std::vector<int>> enumerate_dwell_sequences(int path_length,
                                                               int horizon,
                                                               int max_stay,
                                                               int start) {
  const int last = path_length - 1;

  // Generate every monotone stay/advance sequence of the right length.
  std::vector<std::vector<int>> all;
  std::vector<int> current{start};
  std::function<void()> rec = [&]() {
    if (static_cast<int>(current.size()) == horizon) {
      all.push_back(current);
      return;
    }
    current.push_back(current.back());  // stay
    rec();
    current.pop_back();
    if (current.back() < last) {  // advance
      current.push_back(current.back() + 1);
      rec();
      current.pop_back();
    }
  };
  rec();

  // A monotone sequence that reaches the final path cell necessarily parks
  // there, so runs on `last` are exactly the padded suffix and exempt from
  // the bound; every other run must respect max_stay.
  std::vector<std::vector<int>> filtered;
  for (const auto& seq : all) {
    bool ok = true;
    int run = 1;
    for (int i = 1; i < horizon && ok; ++i) {
      run = (seq[i] == seq[i - 1]) ? run + 1 : 1;
      if (run > max_stay && seq[i] != last) ok = false;
    }
    if (ok) filtered.push_back(seq);
  }
  std::sort(filtered.begin(), filtered.end());
  filtered.erase(std::unique(filtered.begin(), filtered.end()), filtered.end());
  return filtered;
}

// Composition-count recurrence C(N) = sum_{j=1..min(m,N)} C(N-j), C(0) = 1.
inline long long composition_count(int horizon, int max_stay) {
  std::vector<long long> dp(horizon + 1, 0);
  dp[0] = 1;
  for (int n = 1; n <= horizon; ++n)
    for (int j = 1; j <= std::min(max_stay, n); ++j) dp[n] += dp[n - j];
  return dp[horizon];
}

// Brute-force risk points: compare every pair of trajectories from distinct
// vehicles at every time step.
struct BruteRiskPoint {
  ceplan::Cell cell;
  std::map<int, std::set<int>> conflicting;  // vehicle -> trajectory indices
};

inline std::map<std::tuple<int, int, int>, BruteRiskPoint> brute_force_risk_points(
    const std::vector<ceplan::TrajectoryLibrary>& libraries) {
  std::map<std::tuple<int, int, int>, BruteRiskPoint> result;
  for (std::size_t a = 0; a < libraries.size(); ++a) {
    for (std::size_t b = a + 1; b < libraries.size(); ++b) {
      for (int i = 0; i < libraries[a].size(); ++i) {
        for (int j = 0; j < libraries[b].size(); ++j) {
          const auto& ta = libraries[a].trajectories[i];
          const auto& tb = libraries[b].trajectories[j];
          for (std::size_t t = 0; t < std::min(ta.size(), tb.size()); ++t) {
            if (ta[t] == tb[t]) {
              const auto key = std::make_tuple(static_cast<int>(t), ta[t].y(), ta[t].x());
              auto& rp = result[key];
              rp.cell = ceplan::Cell{ta[t].x(), ta[t].y(), static_cast<int>(t)};
              rp.conflicting[libraries[a].vehicle_id].insert(i);
              rp.conflicting[libraries[b].vehicle_id].insert(j);
            }
          }
        }
      }
    }
  }
  return result;
}

// Literal transliteration of the rationality constraint, kept separate from
// the library implementation.
inline double ce_residual_reference(const ceplan::CEProblem& problem, int vehicle,
                                    const std::vector<Eigen::VectorXd>& p) {
  const auto plogp = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  const auto mass_of = [](const Eigen::VectorXd& dist, const std::vector<int>& idx) {
    double m = 0.0;
    for (int n : idx) m += dist[n];
    return m;
  };
  const auto yield = [&](double mass, double d) {
    return d <= problem.d_tor ? 1.0 - mass : mass;
  };

  const auto& veh = problem.vehicles[vehicle];
  double lhs = 0.0, rhs = 0.0;
  for (int n = 0; n < veh.initial.size(); ++n) {
    lhs += plogp(p[vehicle][n]) + p[vehicle][n] * veh.lengths[n];
    rhs += plogp(veh.initial[n]) + veh.initial[n] * veh.lengths[n];
  }
  for (const auto& risk : problem.risks) {
    int mine = -1;
    for (std::size_t j = 0; j < risk.vehicles.size(); ++j)
      if (risk.vehicles[j] == vehicle) mine = static_cast<int>(j);
    if (mine < 0) continue;
    double others = 1.0;
    for (std::size_t j = 0; j < risk.vehicles.size(); ++j)
      if (static_cast<int>(j) != mine)
        others *= mass_of(p[risk.vehicles[j]], risk.conflicting[j]);
    lhs -= yield(mass_of(p[vehicle], risk.conflicting[mine]), risk.distance[mine]) *
           others;
    rhs -= yield(mass_of(veh.initial, risk.conflicting[mine]), risk.distance[mine]) *
           others;
  }
  return lhs - rhs;
}

}  // namespace oracles

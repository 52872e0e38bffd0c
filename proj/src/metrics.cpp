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

#include "ceplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ceplan {

EpisodeMetrics compute_metrics(const EpisodeLog& log) {
  EpisodeMetrics metrics;

  double planning_seconds = 0.0;
  for (const auto& cycle : log.cycles) planning_seconds += cycle.cycle_seconds;
  metrics.f_hz = planning_seconds > 0.0
                     ? static_cast<double>(log.cycles.size()) / planning_seconds
                     : 0.0;

  int last_arrival = 0;
  bool all_reached = !log.vehicles.empty();
  for (const auto& vehicle : log.vehicles) {
    if (vehicle.reached_goal)
      last_arrival = std::max(last_arrival, vehicle.completion_tick);
    else
      all_reached = false;
  }
  const int final_tick = log.ticks.empty() ? 0 : log.ticks.back().tick;
  metrics.t_total = (all_reached ? last_arrival : final_tick) * log.temporal_resolution;

  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (const auto& record : log.ticks) {
    for (std::size_t a = 0; a < record.vehicles.size(); ++a) {
      if (!record.vehicles[a].active) continue;
      for (std::size_t b = a + 1; b < record.vehicles.size(); ++b) {
        if (!record.vehicles[b].active) continue;
        if (log.vehicles[a].approach == log.vehicles[b].approach) continue;
        const double distance =
            (record.vehicles[a].position - record.vehicles[b].position).norm();
        if (distance < best) best = distance;
        found = true;
      }
    }
  }
  if (found) metrics.d_min = best;
  return metrics;
}

namespace {

std::vector<double> min_max_normalize(const std::vector<double>& values) {
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  std::vector<double> scores(values.size(), 0.5);  // degenerate range convention
  if (hi - lo > 1e-12) {
    for (std::size_t i = 0; i < values.size(); ++i)
      scores[i] = (values[i] - lo) / (hi - lo);
  }
  return scores;
}

}  // namespace

std::vector<FocusWeights> safety_efficiency_weights(
    const std::vector<AlgorithmRun>& runs) {
  if (runs.size() < 2)
    throw std::invalid_argument(
        "safety_efficiency_weights: need at least two algorithms");

  std::vector<double> safety_raw, efficiency_raw;
  for (const auto& run : runs) {
    if (!(run.t_total > 0.0))
      throw std::invalid_argument("safety_efficiency_weights: t_total must be > 0");
    safety_raw.push_back(run.d_min);
    efficiency_raw.push_back(1.0 / run.t_total);
  }
  const auto safety_scores = min_max_normalize(safety_raw);
  const auto efficiency_scores = min_max_normalize(efficiency_raw);

  std::vector<FocusWeights> weights;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const double es = std::exp(safety_scores[i]);
    const double ee = std::exp(efficiency_scores[i]);
    weights.push_back({runs[i].label, es / (es + ee), ee / (es + ee)});
  }
  return weights;
}

}  // namespace ceplan

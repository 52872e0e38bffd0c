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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ceplan/sim.hpp"

namespace ceplan {

struct EpisodeMetrics {
  double f_hz = 0.0;      // planning cycles per wall-clock second spent planning
  double t_total = 0.0;   // seconds from episode start to last goal arrival
  std::optional<double> d_min;  // min distance between different approaches
};

/// Episode-level evaluation metrics. d_min considers only ticks where both
/// vehicles of a pair are still en route and their approach labels differ;
/// it is absent for single-vehicle logs (or when all approaches coincide).
EpisodeMetrics compute_metrics(const EpisodeLog& log);

/// One algorithm's headline numbers, as used for the weight decomposition.
struct AlgorithmRun {
  std::string label;
  double d_min = 0.0;
  double t_total = 0.0;
};

struct FocusWeights {
  std::string label;
  double w_safety = 0.0;
  double w_efficiency = 0.0;
};

/// Safety/efficiency focus per algorithm: min-max normalize d_min and
/// 1/t_total across algorithms, then softmax the two normalized scores per
/// algorithm. A degenerate range (all algorithms equal on a metric) maps to
/// score 0.5 for everyone.
std::vector<FocusWeights> safety_efficiency_weights(
    const std::vector<AlgorithmRun>& runs);

}  // namespace ceplan

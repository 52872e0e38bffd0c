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

#include "ceplan/preference.hpp"

#include <algorithm>
#include <cmath>

namespace ceplan {

void PreferenceParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw ConfigError("PreferenceParams: alpha and beta must be finite");
  if (comfort_weight < 0.0 || efficiency_weight < 0.0)
    throw ConfigError("PreferenceParams: weights must be non-negative");
  if (comfort_weight == 0.0 && efficiency_weight == 0.0)
    throw ConfigError("PreferenceParams: at least one weight must be positive");
}

double raw_preference(const TrajectoryStats& stats, double max_arc_length,
                      const PreferenceParams& params) {
  return params.comfort_weight * stats.avg_accel +
         params.efficiency_weight * (max_arc_length - stats.arc_length);
}

Eigen::VectorXd raw_preferences(const std::vector<TrajectoryStats>& stats,
                                const PreferenceParams& params) {
  double s_max = 0.0;
  for (const auto& s : stats) s_max = std::max(s_max, s.arc_length);
  Eigen::VectorXd scores(static_cast<int>(stats.size()));
  for (int i = 0; i < scores.size(); ++i)
    scores[i] = raw_preference(stats[i], s_max, params);
  return scores;
}

PreferenceDistribution mnl_probabilities(const Eigen::VectorXd& scores,
                                         const PreferenceParams& params) {
  if (scores.size() < 1)
    throw std::invalid_argument("mnl_probabilities: need at least one score");
  const Eigen::VectorXd utilities =
      -(params.alpha + (params.beta * scores.array())).matrix();
  const double shift = utilities.maxCoeff();
  const Eigen::VectorXd weights = (utilities.array() - shift).exp();
  return weights / weights.sum();
}

}  // namespace ceplan

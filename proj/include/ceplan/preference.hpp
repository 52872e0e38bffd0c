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
#include <vector>

#include "ceplan/library.hpp"

namespace ceplan {

/// Probabilities over a vehicle's trajectory library.
using PreferenceDistribution = Eigen::VectorXd;

/// Per-vehicle multinomial-logit parameters plus the mixing weights that
/// turn (arc length, average acceleration) into a single raw score.
struct PreferenceParams {
  double alpha = 0.0;
  double beta = 1.0;
  double comfort_weight = 1.0;     // weight on average acceleration
  double efficiency_weight = 1.0;  // weight on arc-length shortfall

  void validate() const;
};

/// Raw score of one trajectory: comfort_weight * avg_accel +
/// efficiency_weight * (s_max - s). Lower is better; the library's longest
/// smooth trajectory scores 0.
double raw_preference(const TrajectoryStats& stats, double max_arc_length,
                      const PreferenceParams& params);

/// Raw scores for a whole library; s_max is taken over the library.
Eigen::VectorXd raw_preferences(const std::vector<TrajectoryStats>& stats,
                                const PreferenceParams& params);

/// Multinomial-logit choice probabilities p_n = softmax(-(alpha + beta *
/// score_n)), computed with max subtraction so large scores cannot overflow.
PreferenceDistribution mnl_probabilities(const Eigen::VectorXd& scores,
                                         const PreferenceParams& params);

}  // namespace ceplan

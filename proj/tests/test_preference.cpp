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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ceplan/preference.hpp"
#include "ceplan/rng.hpp"

using namespace ceplan;

TEST_CASE("raw preference scores") {
  PreferenceParams params;  // weights (1, 1)

  // The longest smooth trajectory scores zero.
  CHECK(raw_preference({1.5, 0.0}, 1.5, params) == doctest::Approx(0.0));

  params.comfort_weight = 0.0;
  params.efficiency_weight = 1.0;
  std::vector<TrajectoryStats> stats{{1.8, 0.4}, {1.2, 0.1}};
  const auto scores = raw_preferences(stats, params);
  CHECK(scores[0] == doctest::Approx(0.0));
  CHECK(scores[1] == doctest::Approx(0.6));

  params.comfort_weight = 1.0;
  const auto mixed = raw_preferences(stats, params);
  CHECK(mixed[0] == doctest::Approx(0.4));        // 0.4 + (1.8 - 1.8)
  CHECK(mixed[1] == doctest::Approx(0.1 + 0.6));  // recomputed by hand
}

TEST_CASE("mnl basics") {
  PreferenceParams params;
  params.alpha = 0.7;
  params.beta = 2.0;

  const Eigen::VectorXd equal = Eigen::VectorXd::Constant(5, 1.3);
  const auto uniform = mnl_probabilities(equal, params);
  for (int i = 0; i < 5; ++i) CHECK(uniform[i] == doctest::Approx(0.2));

  // Shift invariance in alpha.
  Eigen::VectorXd scores(3);
  scores << 0.0, 0.4, 1.1;
  PreferenceParams shifted = params;
  shifted.alpha = -3.0;
  const auto p1 = mnl_probabilities(scores, params);
  const auto p2 = mnl_probabilities(scores, shifted);
  CHECK((p1 - p2).lpNorm<Eigen::Infinity>() < 1e-14);

  // Closed form: beta=1, alpha=0, scores {0, ln 2} -> {2/3, 1/3}.
  PreferenceParams unit;
  unit.alpha = 0.0;
  unit.beta = 1.0;
  Eigen::VectorXd pair(2);
  pair << 0.0, std::log(2.0);
  const auto p = mnl_probabilities(pair, unit);
  CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mnl properties on random inputs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(uniform01(rng) * 12);
    Eigen::VectorXd scores(k);
    for (int i = 0; i < k; ++i) scores[i] = (uniform01(rng) - 0.2) * 40.0;
    PreferenceParams params;
    params.alpha = (uniform01(rng) - 0.5) * 10.0;
    params.beta = uniform01(rng) * 5.0 + 0.01;

    const auto p = mnl_probabilities(scores, params);
    CHECK(std::abs(p.sum() - 1.0) < 1e-12);
    CHECK(p.minCoeff() > 0.0);

    // Monotone: lower score => strictly higher probability (beta > 0).
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (scores[i] < scores[j] - 1e-9) CHECK(p[i] > p[j]);
      }
    }

    // Scaling beta preserves the argmax.
    PreferenceParams scaled = params;
    scaled.beta *= 3.0;
    const auto q = mnl_probabilities(scores, scaled);
    int arg_p = 0, arg_q = 0;
    p.maxCoeff(&arg_p);
    q.maxCoeff(&arg_q);
    CHECK(arg_p == arg_q);
  }
}

TEST_CASE("mnl survives extreme scores") {
  PreferenceParams params;
  params.beta = 1.0;
  Eigen::VectorXd scores(3);
  scores << 0.0, 800.0, -800.0;
  const auto p = mnl_probabilities(scores, params);
  CHECK(std::isfinite(p.sum()));
  CHECK(p.sum() == doctest::Approx(1.0));
  CHECK(p[2] > 0.999);  // most negative score dominates
}

TEST_CASE("params validation") {
  PreferenceParams params;
  params.comfort_weight = 0.0;
  params.efficiency_weight = 0.0;
  CHECK_THROWS_AS(params.validate(), ConfigError);
  params.efficiency_weight = -1.0;
  CHECK_THROWS_AS(params.validate(), ConfigError);
}

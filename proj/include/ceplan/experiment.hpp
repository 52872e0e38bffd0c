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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ceplan/metrics.hpp"
#include "ceplan/sim.hpp"

namespace ceplan {

struct RunArtifacts {
  EpisodeLog log;
  EpisodeMetrics metrics;
};

/// Runs one episode and writes episode.json, metrics.csv, distributions.csv
/// and timing.csv into `out_dir` (created if needed). Every float in the
/// deterministic outputs is printed at 9 significant digits; wall-clock
/// derived values (planning frequency, solve times) live in timing.csv
/// only, so the other artifacts are byte-identical across reruns.
RunArtifacts run_scenario(const ScenarioConfig& scenario, const std::string& out_dir,
                          bool quiet = false);

struct MonteCarloResult {
  std::vector<int> braking_totals;      // per iteration, summed over vehicles
  std::map<int, int> histogram;         // total braking count -> occurrences
  int iterations = 0;
};

/// Monte Carlo braking study: perturbs every vehicle's alpha and beta with
/// independent Gaussian noise, runs one episode per iteration and collects
/// the fleet's total braking count. Iterations run on a worker pool;
/// per-iteration seeds derive from `seed`, so the result does not depend on
/// scheduling.
MonteCarloResult monte_carlo(const ScenarioConfig& scenario, int iterations,
                             double sigma_alpha, double sigma_beta,
                             std::uint64_t seed, int threads = 0);

/// Writes the histogram as braking_hist.csv under `out_dir`.
void write_braking_histogram(const MonteCarloResult& result,
                             const std::string& out_dir);

/// Serializes a log the way run_scenario does (deterministic content only).
std::string episode_json(const EpisodeLog& log);

}  // namespace ceplan

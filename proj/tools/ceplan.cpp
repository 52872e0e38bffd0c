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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ceplan/experiment.hpp"
#include "ceplan/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Correlated-equilibrium multi-vehicle intersection simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int execute_steps = 0;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run one scenario episode");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--execute-steps", execute_steps,
                  "Override coarse steps executed per replan cycle");
  run->add_flag("--quiet", quiet, "Suppress progress output");

  int iterations = 150;
  double sigma_alpha = 0.5;
  double sigma_beta = 0.5;
  auto* mc = app.add_subcommand("monte-carlo",
                                "Braking study with noisy preference parameters");
  mc->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  mc->add_option("--out", out_dir, "Output directory");
  mc->add_option("--iterations", iterations, "Number of noisy episodes");
  mc->add_option("--sigma-alpha", sigma_alpha, "Gaussian noise sigma on alpha");
  mc->add_option("--sigma-beta", sigma_beta, "Gaussian noise sigma on beta");
  mc->add_option("--seed", seed, "Override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });
  mc->add_flag("--quiet", quiet, "Suppress progress output");

  CLI11_PARSE(app, argc, argv);

  try {
    ceplan::ScenarioConfig scenario = ceplan::load_scenario(scenario_path);
    if (seed_set) scenario.sim.seed = seed;
    if (execute_steps > 0) scenario.sim.execute_steps = execute_steps;
    scenario.validate();

    if (app.got_subcommand(run)) {
      const auto artifacts = ceplan::run_scenario(scenario, out_dir, quiet);
      if (!quiet) {
        std::cout << "t_total=" << artifacts.metrics.t_total << " s";
        if (artifacts.metrics.d_min)
          std::cout << " d_min=" << *artifacts.metrics.d_min << " m";
        std::cout << "\n";
      }
    } else {
      const auto result = ceplan::monte_carlo(scenario, iterations, sigma_alpha,
                                              sigma_beta, scenario.sim.seed);
      ceplan::write_braking_histogram(result, out_dir);
      if (!quiet) {
        std::cout << "monte-carlo: " << result.iterations << " iterations\n";
        for (const auto& [total, count] : result.histogram)
          std::cout << "  braking " << total << ": " << count << "\n";
      }
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}

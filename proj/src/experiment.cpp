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

#include "ceplan/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "ceplan/rng.hpp"

namespace ceplan {

namespace {

using nlohmann::json;

// All deterministic float output goes through this: 9 significant digits.
double round9(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return std::strtod(buffer, nullptr);
}

std::string format9(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw ConfigError("cannot write '" + path + "'");
  stream << content;
}

}  // namespace

std::string episode_json(const EpisodeLog& log) {
  json root;
  root["schema_version"] = 1;
  root["temporal_resolution"] = round9(log.temporal_resolution);
  root["safety_threshold"] = round9(log.safety_threshold);
  root["collision"] = log.collision;
  root["cell_conflict"] = log.cell_conflict;
  root["completed"] = log.completed;

  root["vehicles"] = json::array();
  for (const auto& vehicle : log.vehicles) {
    root["vehicles"].push_back({{"id", vehicle.id},
                                {"approach", vehicle.approach},
                                {"reached_goal", vehicle.reached_goal},
                                {"completion_tick", vehicle.completion_tick},
                                {"braking", vehicle.braking_count}});
  }

  root["ticks"] = json::array();
  for (const auto& record : log.ticks) {
    json tick;
    tick["tick"] = record.tick;
    tick["vehicles"] = json::array();
    for (const auto& vt : record.vehicles) {
      tick["vehicles"].push_back({{"id", vt.id},
                                  {"x", round9(vt.position.x())},
                                  {"y", round9(vt.position.y())},
                                  {"vx", round9(vt.velocity.x())},
                                  {"vy", round9(vt.velocity.y())},
                                  {"cell", {vt.cell.x(), vt.cell.y()}},
                                  {"path_index", vt.path_index},
                                  {"active", vt.active},
                                  {"wait", vt.wait_step}});
    }
    root["ticks"].push_back(tick);
  }

  root["cycles"] = json::array();
  for (const auto& cycle : log.cycles) {
    json record;
    record["cycle"] = cycle.cycle;
    record["tick"] = cycle.tick;
    record["risk_points"] = cycle.num_risk_points;
    record["objective_initial"] = round9(cycle.initial_objective);
    record["objective"] = round9(cycle.objective);
    record["solver_iterations"] = cycle.solver_iterations;
    record["solver_converged"] = cycle.solver_converged;
    record["vehicles"] = json::array();
    for (const auto& vehicle : cycle.vehicles) {
      record["vehicles"].push_back({{"id", vehicle.id},
                                    {"sampled_index", vehicle.sampled_index},
                                    {"solver_fallback", vehicle.solver_fallback},
                                    {"refine_fallback", vehicle.refine_fallback}});
    }
    root["cycles"].push_back(record);
  }
  return root.dump(2) + "\n";
}

RunArtifacts run_scenario(const ScenarioConfig& scenario, const std::string& out_dir,
                          bool quiet) {
  for (const auto& warning : scenario.warnings())
    if (!quiet) std::cerr << "warning: " << warning << "\n";

  RunArtifacts artifacts;
  artifacts.log = run_episode(scenario);
  artifacts.metrics = compute_metrics(artifacts.log);

  std::filesystem::create_directories(out_dir);
  const auto path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  write_file(path("episode.json"), episode_json(artifacts.log));

  // Deterministic per-episode metrics; wall-clock metrics go to timing.csv.
  {
    std::string csv = "episode,t_total_s,d_min_m,braking_total,ticks,collision\n";
    int braking = 0;
    for (const auto& vehicle : artifacts.log.vehicles) braking += vehicle.braking_count;
    csv += "0," + format9(artifacts.metrics.t_total) + ",";
    csv += artifacts.metrics.d_min ? format9(*artifacts.metrics.d_min) : "";
    csv += "," + std::to_string(braking);
    csv += "," + std::to_string(artifacts.log.ticks.empty()
                                    ? 0
                                    : artifacts.log.ticks.back().tick);
    csv += std::string(",") + (artifacts.log.collision ? "1" : "0") + "\n";
    write_file(path("metrics.csv"), csv);
  }

  {
    std::string csv = "cycle,vehicle,trajectory,initial,recommended\n";
    for (const auto& cycle : artifacts.log.cycles) {
      for (const auto& vehicle : cycle.vehicles) {
        for (int n = 0; n < vehicle.initial.size(); ++n) {
          csv += std::to_string(cycle.cycle) + "," + std::to_string(vehicle.id) + "," +
                 std::to_string(n) + "," + format9(vehicle.initial[n]) + "," +
                 format9(vehicle.recommended[n]) + "\n";
        }
      }
    }
    write_file(path("distributions.csv"), csv);
  }

  {
    double planning_seconds = 0.0;
    double solve_seconds = 0.0;
    for (const auto& cycle : artifacts.log.cycles) {
      planning_seconds += cycle.cycle_seconds;
      solve_seconds += cycle.solve_seconds;
    }
    std::string csv = "episode,planning_cycles,planning_wall_s,f_hz,im_solve_wall_s\n";
    csv += "0," + std::to_string(artifacts.log.cycles.size()) + "," +
           format9(planning_seconds) + "," + format9(artifacts.metrics.f_hz) + "," +
           format9(solve_seconds) + "\n";
    write_file(path("timing.csv"), csv);
  }

  if (!quiet) {
    std::cout << "episode: ticks=" << (artifacts.log.ticks.empty()
                                           ? 0
                                           : artifacts.log.ticks.back().tick)
              << " cycles=" << artifacts.log.cycles.size()
              << " completed=" << (artifacts.log.completed ? "yes" : "no")
              << " collision=" << (artifacts.log.collision ? "yes" : "no") << "\n";
  }
  return artifacts;
}

MonteCarloResult monte_carlo(const ScenarioConfig& scenario, int iterations,
                             double sigma_alpha, double sigma_beta,
                             std::uint64_t seed, int threads) {
  if (iterations < 1)
    throw std::invalid_argument("monte_carlo: iterations must be >= 1");
  scenario.validate();

  MonteCarloResult result;
  result.iterations = iterations;
  result.braking_totals.assign(iterations, 0);

  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, iterations));

  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (int iteration = next.fetch_add(1); iteration < iterations;
         iteration = next.fetch_add(1)) {
      const std::uint64_t iteration_seed =
          derive_seed(seed, static_cast<std::uint64_t>(iteration));
      ScenarioConfig perturbed = scenario;
      std::mt19937_64 noise(derive_seed(iteration_seed, 0xA1FA));
      for (auto& vehicle : perturbed.vehicles) {
        vehicle.prefs.alpha = gaussian(noise, vehicle.prefs.alpha, sigma_alpha);
        vehicle.prefs.beta = gaussian(noise, vehicle.prefs.beta, sigma_beta);
      }
      perturbed.sim.seed = derive_seed(iteration_seed, 0x51ED);
      const EpisodeLog log = run_episode(perturbed);
      int total = 0;
      for (const auto& vehicle : log.vehicles) total += vehicle.braking_count;
      result.braking_totals[iteration] = total;
    }
  };

  std::vector<std::thread> pool;
  for (int i = 0; i < threads - 1; ++i) pool.emplace_back(worker);
  worker();
  for (auto& thread : pool) thread.join();

  for (const int total : result.braking_totals) ++result.histogram[total];
  return result;
}

void write_braking_histogram(const MonteCarloResult& result,
                             const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::string csv = "braking_total,count,frequency\n";
  for (const auto& [total, count] : result.histogram) {
    csv += std::to_string(total) + "," + std::to_string(count) + "," +
           format9(static_cast<double>(count) / result.iterations) + "\n";
  }
  write_file((std::filesystem::path(out_dir) / "braking_hist.csv").string(), csv);
}

}  // namespace ceplan

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

// Receding-horizon closed loop: project each vehicle onto its global path,
// regenerate libraries and preferences, let the intersection manager place
// risk points and solve the recommendation problem, then sample, refine and
// execute a prefix of the plan. Repeats until every vehicle reaches its
// goal or the tick budget runs out.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ceplan/coordinator.hpp"
#include "ceplan/corridor.hpp"
#include "ceplan/grid.hpp"
#include "ceplan/library.hpp"
#include "ceplan/preference.hpp"
#include "ceplan/refine.hpp"

namespace ceplan {

struct VehicleSpec {
  int id = 0;
  Eigen::Vector2i start;
  Eigen::Vector2i goal;
  std::string approach;  // arm label, e.g. "east"; used by the d_min metric
  PreferenceParams prefs;
};

struct SimConfig {
  int horizon_steps = 6;   // N
  int max_stay = 2;        // m
  double d_tor = 2.0;
  double epsilon = 1e-3;
  int execute_steps = 1;   // coarse steps executed per replan cycle
  double safety_threshold = 0.3;  // meters
  int max_ticks = 200;
  std::uint64_t seed = 1;
  SolveOptions solver;
  int qp_samples = 20;

  void validate() const;
};

struct ScenarioConfig {
  GridSpec grid;  // grid.horizon mirrors sim.horizon_steps
  double vehicle_length = 0.3;  // meters, for the cell-size sanity warning
  std::vector<Eigen::Vector2i> obstacles;
  std::vector<VehicleSpec> vehicles;
  SimConfig sim;

  void validate() const;
  /// Non-fatal findings, e.g. cells smaller than the vehicle.
  std::vector<std::string> warnings() const;
};

struct VehicleTick {
  int id = 0;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  Eigen::Vector2i cell;      // executed coarse cell at this tick
  int path_index = 0;
  bool active = false;       // executing during this tick
  bool wait_step = false;    // executed coarse step did not advance
};

struct TickRecord {
  int tick = 0;
  std::vector<VehicleTick> vehicles;
};

struct CycleVehicleRecord {
  int id = 0;
  Eigen::VectorXd initial;      // epsilon-floored preference distribution
  Eigen::VectorXd recommended;  // what the vehicle actually sampled from
  int sampled_index = 0;
  bool solver_fallback = false;  // recommendation discarded, initial used
  bool refine_fallback = false;  // QP unusable, linear cell tracking used
};

struct CycleRecord {
  int cycle = 0;
  int tick = 0;  // tick at which this cycle planned
  int num_risk_points = 0;
  double initial_objective = 0.0;
  double objective = 0.0;
  int solver_iterations = 0;
  bool solver_converged = true;
  std::vector<CycleVehicleRecord> vehicles;
  // Wall-clock instrumentation; excluded from deterministic serializations.
  double solve_seconds = 0.0;
  double cycle_seconds = 0.0;
};

struct VehicleSummary {
  int id = 0;
  std::string approach;
  bool reached_goal = false;
  int completion_tick = -1;
  int braking_count = 0;
};

struct EpisodeLog {
  double temporal_resolution = 0.6;
  double safety_threshold = 0.3;
  std::vector<TickRecord> ticks;  // tick 0 holds the initial state
  std::vector<CycleRecord> cycles;
  std::vector<VehicleSummary> vehicles;
  bool collision = false;      // continuous distance under the threshold
  bool cell_conflict = false;  // two executed steps shared a cell and tick
  bool completed = false;      // every vehicle reached its goal
};

/// Runs one closed-loop episode. Deterministic for a fixed scenario (all
/// randomness derives from sim.seed). Throws UnreachableError when a
/// vehicle has no path to its goal.
EpisodeLog run_episode(const ScenarioConfig& scenario);

/// Per-vehicle count of executed wait steps (post-goal idling excluded),
/// recomputed from the tick log.
std::vector<int> count_braking(const EpisodeLog& log);

}  // namespace ceplan

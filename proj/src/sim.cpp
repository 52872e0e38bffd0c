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

#include "ceplan/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <unordered_set>

#include "ceplan/path.hpp"
#include "ceplan/rng.hpp"

namespace ceplan {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Mutable per-vehicle state of the episode loop.
struct VehicleRuntime {
  VehicleSpec spec;
  GridPath path;
  int path_index = 0;
  Eigen::Vector2d position;
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  Eigen::Vector2d acceleration = Eigen::Vector2d::Zero();
  std::mt19937_64 rng;
  bool done = false;
  int completion_tick = -1;

  // Plan of the current cycle.
  CoarseTrajectory sampled;
  PiecewiseTrajectory refined;
  bool refine_ok = false;
};

Eigen::Vector2d clamp_to_box(const Eigen::Vector2d& p, const Eigen::AlignedBox2d& box) {
  return p.cwiseMax(box.min()).cwiseMin(box.max());
}

int advance_path_index(const VehicleRuntime& vehicle, const Eigen::Vector2i& cell) {
  // The executed cell is either the current path cell or the next one.
  const auto& path = vehicle.path;
  for (int i = vehicle.path_index;
       i < std::min<int>(vehicle.path_index + 2, static_cast<int>(path.size())); ++i) {
    if (path[i].x() == cell.x() && path[i].y() == cell.y()) return i;
  }
  return vehicle.path_index;
}

}  // namespace

void SimConfig::validate() const {
  if (horizon_steps < 2) throw ConfigError("sim: horizon_steps must be >= 2");
  if (max_stay < 1) throw ConfigError("sim: max_stay must be >= 1");
  if (execute_steps < 1 || execute_steps >= horizon_steps)
    throw ConfigError("sim: execute_steps must satisfy 1 <= e < horizon_steps");
  if (d_tor < 0.0) throw ConfigError("sim: d_tor must be >= 0");
  if (!(epsilon > 0.0) || epsilon >= 1.0)
    throw ConfigError("sim: epsilon must lie in (0, 1)");
  if (!(safety_threshold > 0.0))
    throw ConfigError("sim: safety_threshold must be positive");
  if (max_ticks < 1) throw ConfigError("sim: max_ticks must be >= 1");
}

void ScenarioConfig::validate() const {
  grid.validate();
  sim.validate();
  if (grid.horizon != sim.horizon_steps)
    throw ConfigError("scenario: grid horizon must equal sim horizon_steps");
  if (vehicles.empty()) throw ConfigError("scenario: no vehicles");

  SpatialSet obstacle_set(obstacles);
  for (const auto& cell : obstacles)
    if (!in_bounds(cell, grid))
      throw ConfigError("scenario: obstacle cell outside grid");

  std::set<std::pair<int, int>> starts;
  std::set<int> ids;
  for (const auto& vehicle : vehicles) {
    if (!ids.insert(vehicle.id).second)
      throw ConfigError("scenario: duplicate vehicle id " + std::to_string(vehicle.id));
    if (!in_bounds(vehicle.start, grid) || !in_bounds(vehicle.goal, grid))
      throw ConfigError("scenario: vehicle " + std::to_string(vehicle.id) +
                        " start or goal outside grid");
    if (obstacle_set.contains(vehicle.start) || obstacle_set.contains(vehicle.goal))
      throw ConfigError("scenario: vehicle " + std::to_string(vehicle.id) +
                        " start or goal on an obstacle");
    if (!starts.insert({vehicle.start.x(), vehicle.start.y()}).second)
      throw ConfigError("scenario: two vehicles share a start cell");
    vehicle.prefs.validate();
  }
}

std::vector<std::string> ScenarioConfig::warnings() const {
  std::vector<std::string> findings;
  if (grid.spatial_resolution < vehicle_length) {
    findings.push_back("grid cells (" + std::to_string(grid.spatial_resolution) +
                       " m) are smaller than the vehicle (" +
                       std::to_string(vehicle_length) +
                       " m); cells should be at least one vehicle length");
  }
  return findings;
}

EpisodeLog run_episode(const ScenarioConfig& scenario) {
  scenario.validate();
  const GridSpec& grid = scenario.grid;
  const SimConfig& sim = scenario.sim;
  const double dt = grid.temporal_resolution;
  const SpatialSet obstacles(scenario.obstacles);

  EpisodeLog log;
  log.temporal_resolution = dt;
  log.safety_threshold = sim.safety_threshold;

  std::vector<VehicleRuntime> fleet;
  for (const auto& spec : scenario.vehicles) {
    VehicleRuntime vehicle;
    vehicle.spec = spec;
    vehicle.path = astar(spec.start, spec.goal, obstacles, grid);  // planned once
    vehicle.position = cell_center(spec.start, grid);
    vehicle.rng.seed(derive_seed(sim.seed, static_cast<std::uint64_t>(spec.id)));
    fleet.push_back(std::move(vehicle));
  }

  // Tick 0: initial state.
  {
    TickRecord record;
    record.tick = 0;
    for (const auto& vehicle : fleet) {
      VehicleTick vt;
      vt.id = vehicle.spec.id;
      vt.position = vehicle.position;
      vt.velocity = vehicle.velocity;
      vt.cell = vehicle.spec.start;
      vt.path_index = 0;
      vt.active = true;
      record.vehicles.push_back(vt);
    }
    log.ticks.push_back(record);
  }

  int tick = 0;
  int cycle = 0;
  while (tick < sim.max_ticks) {
    std::vector<int> planning;  // fleet indices still en route
    for (int i = 0; i < static_cast<int>(fleet.size()); ++i)
      if (!fleet[i].done) planning.push_back(i);
    if (planning.empty()) break;

    const auto cycle_start = std::chrono::steady_clock::now();
    CycleRecord cycle_record;
    cycle_record.cycle = cycle;
    cycle_record.tick = tick;

    // Plan phase: project, regenerate libraries, preferences.
    std::vector<TrajectoryLibrary> libraries;
    std::vector<PreferenceDistribution> initial;
    std::vector<Eigen::VectorXd> lengths;
    std::vector<Eigen::Vector2i> current_cells;
    for (const int i : planning) {
      VehicleRuntime& vehicle = fleet[i];
      vehicle.path_index = std::max(
          vehicle.path_index, project_onto_path(vehicle.position, vehicle.path, grid));
      libraries.push_back(generate_trajectory_library(
          vehicle.path, sim.horizon_steps, sim.max_stay, vehicle.path_index,
          vehicle.spec.id));
      const auto stats = library_stats(libraries.back(), grid);
      initial.push_back(
          mnl_probabilities(raw_preferences(stats, vehicle.spec.prefs),
                            vehicle.spec.prefs));
      Eigen::VectorXd len(static_cast<int>(stats.size()));
      for (int n = 0; n < len.size(); ++n) len[n] = stats[n].arc_length;
      lengths.push_back(len);
      current_cells.push_back(vehicle.path[vehicle.path_index]);
    }

    // Intersection manager: risk points and recommendation.
    OccupancyIndex index(grid);
    for (std::size_t v = 0; v < libraries.size(); ++v)
      for (int n = 0; n < libraries[v].size(); ++n)
        index.insert_trajectory(libraries[v].vehicle_id, n,
                                libraries[v].trajectories[n]);
    const auto risk_points = locate_risk_points(index);
    const CEProblem problem =
        make_ce_problem(libraries, initial, lengths, current_cells, risk_points,
                        sim.d_tor, sim.epsilon);

    const auto solve_start = std::chrono::steady_clock::now();
    const Recommendation recommendation = solve_recommendation(problem, sim.solver);
    cycle_record.solve_seconds = seconds_since(solve_start);

    const bool fallback = !recommendation.converged;
    cycle_record.num_risk_points = static_cast<int>(risk_points.size());
    cycle_record.initial_objective = recommendation.initial_objective;
    cycle_record.objective =
        fallback ? recommendation.initial_objective : recommendation.objective;
    cycle_record.solver_iterations = recommendation.iterations;
    cycle_record.solver_converged = recommendation.converged;

    // Sample, build corridors, refine.
    for (std::size_t v = 0; v < planning.size(); ++v) {
      VehicleRuntime& vehicle = fleet[planning[v]];
      const PreferenceDistribution& dist =
          fallback ? problem.vehicles[v].initial : recommendation.distributions[v];

      CycleVehicleRecord record;
      record.id = vehicle.spec.id;
      record.initial = problem.vehicles[v].initial;
      record.recommended = dist;
      record.solver_fallback = fallback;

      // Inside the goal-padding zone the arc-length efficiency term cannot
      // tell early arrivals from late ones (full-progress trajectories all
      // have the same length), so sampling dithers between time-reversed
      // twins. With no conflicts on this vehicle the draw carries no
      // coordination value; commit to the distribution's mode instead.
      const bool endgame = static_cast<int>(vehicle.path.size()) -
                               vehicle.path_index < sim.horizon_steps;
      bool involved = false;
      for (const auto& rp : risk_points)
        for (const int id : rp.participants)
          if (id == vehicle.spec.id) involved = true;
      if (endgame && !involved) {
        // Smallest index within fp noise of the max: time-reversed twins
        // score identically up to rounding, and lower indices make their
        // progress earlier (dwell-1-first enumeration order).
        const double top = dist.maxCoeff();
        int mode = 0;
        while (dist[mode] < top - 1e-12 * (1.0 + top)) ++mode;
        record.sampled_index = mode;
      } else {
        record.sampled_index = sample_trajectory_index(dist, vehicle.rng);
      }
      vehicle.sampled = libraries[v].trajectories[record.sampled_index];

      const Corridor corridor = build_corridor(vehicle.sampled, grid);
      BoundaryState start;
      start.position = clamp_to_box(vehicle.position, corridor.segments.front().box);
      start.velocity = vehicle.velocity;
      start.acceleration = vehicle.acceleration;
      EndCondition end;
      end.position = cell_center(vehicle.sampled.back(), grid);
      const int n = static_cast<int>(vehicle.sampled.size());
      if (vehicle.sampled[n - 1] == vehicle.sampled[n - 2])
        end.velocity = Eigen::Vector2d::Zero();  // plan ends waiting

      // Pin the executed steps to their cell centers so execution honors
      // the spatial-temporal reservation exactly.
      std::vector<TimedPosition> pins;
      for (int step = 1; step <= sim.execute_steps; ++step)
        pins.push_back({step * dt, cell_center(vehicle.sampled[step], grid)});

      vehicle.refine_ok = false;
      try {
        const QPResult refined =
            refine_trajectory(corridor, start, end, sim.qp_samples, pins);
        if (refined.feasible) {
          vehicle.refined = refined.trajectory;
          vehicle.refine_ok = true;
        }
      } catch (const Error&) {
        vehicle.refine_ok = false;
      }
      record.refine_fallback = !vehicle.refine_ok;
      cycle_record.vehicles.push_back(std::move(record));
    }

    cycle_record.cycle_seconds = seconds_since(cycle_start);
    log.cycles.push_back(std::move(cycle_record));
    ++cycle;

    // Execution phase: everyone tracks its refined trajectory.
    std::vector<char> was_planning(fleet.size(), 0);
    for (const int i : planning) was_planning[i] = 1;
    for (int step = 1; step <= sim.execute_steps && tick < sim.max_ticks; ++step) {
      ++tick;
      TickRecord record;
      record.tick = tick;
      for (std::size_t vi = 0; vi < fleet.size(); ++vi) {
        VehicleRuntime& vehicle = fleet[vi];
        VehicleTick vt;
        vt.id = vehicle.spec.id;
        const bool executing = !vehicle.done && was_planning[vi];
        if (!executing) {
          vt.position = vehicle.position;
          vt.velocity = Eigen::Vector2d::Zero();
          vt.cell = vehicle.done ? vehicle.spec.goal
                                 : vehicle.path[vehicle.path_index];
          vt.path_index = vehicle.path_index;
          vt.active = false;
          record.vehicles.push_back(vt);
          continue;
        }

        const Eigen::Vector2i previous_cell = vehicle.sampled[step - 1];
        const Eigen::Vector2i executed_cell = vehicle.sampled[step];
        const double tau = step * dt;
        if (vehicle.refine_ok) {
          vehicle.position = vehicle.refined.evaluate(tau, 0);
          vehicle.velocity = vehicle.refined.evaluate(tau, 1);
          vehicle.acceleration = vehicle.refined.evaluate(tau, 2);
        } else {
          // Linear cell tracking keeps the episode alive when the QP has no
          // usable answer.
          vehicle.position = cell_center(executed_cell, grid);
          vehicle.velocity =
              (cell_center(executed_cell, grid) - cell_center(previous_cell, grid)) /
              dt;
          vehicle.acceleration = Eigen::Vector2d::Zero();
        }

        vehicle.path_index = advance_path_index(vehicle, executed_cell);
        vt.position = vehicle.position;
        vt.velocity = vehicle.velocity;
        vt.cell = executed_cell;
        vt.path_index = vehicle.path_index;
        vt.active = true;
        vt.wait_step = executed_cell == previous_cell &&
                       previous_cell != vehicle.spec.goal;

        if (executed_cell == vehicle.spec.goal) {
          vehicle.done = true;
          vehicle.completion_tick = tick;
          vehicle.position = cell_center(vehicle.spec.goal, grid);
          vehicle.velocity = Eigen::Vector2d::Zero();
          vehicle.acceleration = Eigen::Vector2d::Zero();
          vt.position = vehicle.position;
          vt.velocity = vehicle.velocity;
        }
        record.vehicles.push_back(vt);
      }
      log.ticks.push_back(std::move(record));
    }
  }

  // Summaries and post-hoc safety accounting.
  for (const auto& vehicle : fleet) {
    VehicleSummary summary;
    summary.id = vehicle.spec.id;
    summary.approach = vehicle.spec.approach;
    summary.reached_goal = vehicle.done;
    summary.completion_tick = vehicle.completion_tick;
    log.vehicles.push_back(summary);
  }
  log.completed = std::all_of(fleet.begin(), fleet.end(),
                              [](const VehicleRuntime& v) { return v.done; });

  const std::vector<int> braking = count_braking(log);
  for (std::size_t i = 0; i < braking.size(); ++i)
    log.vehicles[i].braking_count = braking[i];

  for (const auto& record : log.ticks) {
    std::unordered_set<std::uint64_t> executed_cells;
    for (std::size_t a = 0; a < record.vehicles.size(); ++a) {
      if (record.vehicles[a].active) {
        const auto key = spatial_key(record.vehicles[a].cell.x(),
                                     record.vehicles[a].cell.y());
        if (!executed_cells.insert(key).second) log.cell_conflict = true;
      }
      for (std::size_t b = a + 1; b < record.vehicles.size(); ++b) {
        const double distance =
            (record.vehicles[a].position - record.vehicles[b].position).norm();
        // 1e-9 guard: adjacent cell centers sit exactly at the threshold.
        if (distance < sim.safety_threshold - 1e-9) log.collision = true;
      }
    }
  }
  return log;
}

std::vector<int> count_braking(const EpisodeLog& log) {
  if (log.ticks.empty()) return {};
  std::vector<int> counts(log.ticks.front().vehicles.size(), 0);
  for (const auto& record : log.ticks) {
    for (std::size_t i = 0; i < record.vehicles.size(); ++i) {
      if (record.vehicles[i].active && record.vehicles[i].wait_step) ++counts[i];
    }
  }
  return counts;
}

}  // namespace ceplan

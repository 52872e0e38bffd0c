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

#include "ceplan/coordinator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace ceplan {

namespace {

double plogp(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Negative entropy plus expected arc length of one distribution.
double utility_terms(const Eigen::VectorXd& p, const Eigen::VectorXd& lengths) {
  double sum = 0.0;
  for (int n = 0; n < p.size(); ++n) sum += plogp(p[n]) + p[n] * lengths[n];
  return sum;
}

}  // namespace

std::vector<RiskPoint> locate_risk_points(const OccupancyIndex& index) {
  std::vector<RiskPoint> points;
  for (const auto& [key, occupants] : index.cells()) {
    // Group trajectory indices by vehicle, sorted for determinism.
    std::map<int, std::vector<int>> by_vehicle;
    for (const auto& occ : occupants)
      by_vehicle[occ.vehicle_id].push_back(occ.trajectory_index);
    if (by_vehicle.size() < 2) continue;

    RiskPoint rp;
    rp.cell = OccupancyIndex::key_to_cell(key);
    for (auto& [vehicle, trajectories] : by_vehicle) {
      std::sort(trajectories.begin(), trajectories.end());
      rp.participants.push_back(vehicle);
      rp.conflicting.push_back(std::move(trajectories));
    }
    points.push_back(std::move(rp));
  }
  std::sort(points.begin(), points.end(), [](const RiskPoint& a, const RiskPoint& b) {
    if (a.cell.t != b.cell.t) return a.cell.t < b.cell.t;
    if (a.cell.y != b.cell.y) return a.cell.y < b.cell.y;
    return a.cell.x < b.cell.x;
  });
  return points;
}

double risk_mass(const PreferenceDistribution& p, const std::vector<int>& indices) {
  double mass = 0.0;
  for (const int n : indices) mass += p[n];
  return mass;
}

double yield_term(double mass, double distance, double d_tor) {
  return distance <= d_tor ? 1.0 - mass : mass;
}

CEProblem make_ce_problem(const std::vector<TrajectoryLibrary>& libraries,
                          const std::vector<PreferenceDistribution>& initial,
                          const std::vector<Eigen::VectorXd>& lengths,
                          const std::vector<Eigen::Vector2i>& current_cells,
                          const std::vector<RiskPoint>& risk_points, double d_tor,
                          double epsilon) {
  const int count = static_cast<int>(libraries.size());
  if (static_cast<int>(initial.size()) != count ||
      static_cast<int>(lengths.size()) != count ||
      static_cast<int>(current_cells.size()) != count)
    throw std::invalid_argument("make_ce_problem: per-vehicle inputs disagree in size");

  CEProblem problem;
  problem.d_tor = d_tor;
  problem.epsilon = epsilon;

  std::map<int, int> slot_of;
  for (int i = 0; i < count; ++i) {
    const int k = libraries[i].size();
    if (initial[i].size() != k || lengths[i].size() != k)
      throw std::invalid_argument("make_ce_problem: distribution/length size mismatch");
    slot_of[libraries[i].vehicle_id] = i;
    problem.vehicles.push_back(
        {project_to_truncated_simplex(initial[i], epsilon), lengths[i]});
  }

  for (const auto& rp : risk_points) {
    CEProblem::Risk risk;
    for (std::size_t j = 0; j < rp.participants.size(); ++j) {
      const auto it = slot_of.find(rp.participants[j]);
      if (it == slot_of.end())
        throw std::invalid_argument("make_ce_problem: risk point names vehicle " +
                                    std::to_string(rp.participants[j]) +
                                    " with no library");
      const int slot = it->second;
      risk.vehicles.push_back(slot);
      risk.conflicting.push_back(rp.conflicting[j]);
      const Eigen::Vector2i& cell = current_cells[slot];
      risk.distance.push_back(std::abs(cell.x() - rp.cell.x) +
                              std::abs(cell.y() - rp.cell.y));
    }
    problem.risks.push_back(std::move(risk));
  }
  return problem;
}

double collision_probability(const CEProblem& problem, int risk_index,
                             const std::vector<PreferenceDistribution>& p) {
  const auto& risk = problem.risks.at(risk_index);
  double product = 1.0;
  for (std::size_t j = 0; j < risk.vehicles.size(); ++j)
    product *= risk_mass(p[risk.vehicles[j]], risk.conflicting[j]);
  return product;
}

double ce_objective(const CEProblem& problem,
                    const std::vector<PreferenceDistribution>& p) {
  double total = 0.0;
  for (int m = 0; m < problem.num_risks(); ++m)
    total += collision_probability(problem, m, p);
  return total;
}

std::vector<Eigen::VectorXd> ce_objective_gradient(
    const CEProblem& problem, const std::vector<PreferenceDistribution>& p) {
  std::vector<Eigen::VectorXd> grad(problem.vehicles.size());
  for (int i = 0; i < problem.num_vehicles(); ++i)
    grad[i] = Eigen::VectorXd::Zero(problem.vehicles[i].initial.size());

  for (const auto& risk : problem.risks) {
    const int parts = static_cast<int>(risk.vehicles.size());
    std::vector<double> mass(parts);
    for (int j = 0; j < parts; ++j)
      mass[j] = risk_mass(p[risk.vehicles[j]], risk.conflicting[j]);
    for (int j = 0; j < parts; ++j) {
      double others = 1.0;
      for (int r = 0; r < parts; ++r)
        if (r != j) others *= mass[r];
      for (const int n : risk.conflicting[j]) grad[risk.vehicles[j]][n] += others;
    }
  }
  return grad;
}

double ce_constraint_residual(const CEProblem& problem, int vehicle,
                              const std::vector<PreferenceDistribution>& p) {
  const auto& veh = problem.vehicles.at(vehicle);
  const double own_candidate = utility_terms(p[vehicle], veh.lengths);
  const double own_initial = utility_terms(veh.initial, veh.lengths);

  double coupling = 0.0;
  for (const auto& risk : problem.risks) {
    const int parts = static_cast<int>(risk.vehicles.size());
    int mine = -1;
    for (int j = 0; j < parts; ++j)
      if (risk.vehicles[j] == vehicle) mine = j;
    if (mine < 0) continue;

    double others = 1.0;
    for (int j = 0; j < parts; ++j)
      if (j != mine) others *= risk_mass(p[risk.vehicles[j]], risk.conflicting[j]);

    const double mass_candidate = risk_mass(p[vehicle], risk.conflicting[mine]);
    const double mass_initial = risk_mass(veh.initial, risk.conflicting[mine]);
    const double d = risk.distance[mine];
    coupling += (yield_term(mass_candidate, d, problem.d_tor) -
                 yield_term(mass_initial, d, problem.d_tor)) *
                others;
  }
  return (own_candidate - own_initial) - coupling;
}

std::vector<Eigen::VectorXd> ce_constraint_gradient(
    const CEProblem& problem, int vehicle,
    const std::vector<PreferenceDistribution>& p) {
  std::vector<Eigen::VectorXd> grad(problem.vehicles.size());
  for (int i = 0; i < problem.num_vehicles(); ++i)
    grad[i] = Eigen::VectorXd::Zero(problem.vehicles[i].initial.size());

  const auto& veh = problem.vehicles.at(vehicle);
  for (int n = 0; n < grad[vehicle].size(); ++n)
    grad[vehicle][n] = std::log(p[vehicle][n]) + 1.0 + veh.lengths[n];

  for (const auto& risk : problem.risks) {
    const int parts = static_cast<int>(risk.vehicles.size());
    int mine = -1;
    for (int j = 0; j < parts; ++j)
      if (risk.vehicles[j] == vehicle) mine = j;
    if (mine < 0) continue;

    std::vector<double> mass(parts);
    for (int j = 0; j < parts; ++j)
      mass[j] = risk_mass(p[risk.vehicles[j]], risk.conflicting[j]);

    const double d = risk.distance[mine];
    const bool near = d <= problem.d_tor;
    const double mass_initial = risk_mass(veh.initial, risk.conflicting[mine]);
    const double yield_delta = yield_term(mass[mine], d, problem.d_tor) -
                               yield_term(mass_initial, d, problem.d_tor);

    // d(yield)/d(own mass) is -1 when near, +1 otherwise.
    double others = 1.0;
    for (int j = 0; j < parts; ++j)
      if (j != mine) others *= mass[j];
    const double own_coeff = (near ? -1.0 : 1.0) * others;
    for (const int n : risk.conflicting[mine]) grad[vehicle][n] -= own_coeff;

    for (int j = 0; j < parts; ++j) {
      if (j == mine) continue;
      double rest = 1.0;
      for (int r = 0; r < parts; ++r)
        if (r != mine && r != j) rest *= mass[r];
      const double coeff = yield_delta * rest;
      for (const int n : risk.conflicting[j]) grad[risk.vehicles[j]][n] -= coeff;
    }
  }
  return grad;
}

Eigen::VectorXd project_to_truncated_simplex(const Eigen::VectorXd& y, double epsilon) {
  const int k = static_cast<int>(y.size());
  if (k < 1) throw std::invalid_argument("project_to_truncated_simplex: empty vector");
  if (epsilon < 0.0 || epsilon * k > 1.0 + 1e-12)
    throw ConfigError("project_to_truncated_simplex: epsilon * k exceeds 1");

  const double radius = 1.0 - epsilon * k;
  if (radius <= 0.0) return Eigen::VectorXd::Constant(k, epsilon);

  std::vector<double> shifted(k);
  for (int i = 0; i < k; ++i) shifted[i] = y[i] - epsilon;
  std::vector<double> sorted = shifted;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  double cumulative = 0.0;
  double theta = 0.0;
  for (int j = 0; j < k; ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - radius) / (j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }

  Eigen::VectorXd out(k);
  for (int i = 0; i < k; ++i) out[i] = std::max(shifted[i] - theta, 0.0) + epsilon;
  return out;
}

namespace {

// Augmented-Lagrangian machinery shared by the solver internals.
struct ALState {
  const CEProblem& problem;
  Eigen::VectorXd lambda;
  double mu;

  double penalty(double residual, double l) const {
    const double slack = std::max(0.0, l - mu * residual);
    return (slack * slack - l * l) / (2.0 * mu);
  }
  double penalty_slope(double residual, double l) const {
    return -std::max(0.0, l - mu * residual);
  }

  double lagrangian(const std::vector<Eigen::VectorXd>& p,
                    Eigen::VectorXd* residuals_out = nullptr) const {
    double value = ce_objective(problem, p);
    Eigen::VectorXd residuals(problem.num_vehicles());
    for (int i = 0; i < problem.num_vehicles(); ++i) {
      residuals[i] = ce_constraint_residual(problem, i, p);
      value += penalty(residuals[i], lambda[i]);
    }
    if (residuals_out != nullptr) *residuals_out = residuals;
    return value;
  }

  Eigen::VectorXd block_gradient(int block, const std::vector<Eigen::VectorXd>& p,
                                 const Eigen::VectorXd& residuals) const {
    const auto objective_grad = ce_objective_gradient(problem, p);
    Eigen::VectorXd grad = objective_grad[block];
    for (int i = 0; i < problem.num_vehicles(); ++i) {
      const double w = penalty_slope(residuals[i], lambda[i]);
      if (w == 0.0) continue;
      const auto constraint_grad = ce_constraint_gradient(problem, i, p);
      grad += w * constraint_grad[block];
    }
    return grad;
  }
};

}  // namespace

namespace {

struct ALRunResult {
  std::vector<Eigen::VectorXd> best;
  double best_objective = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_residuals;
  bool found_feasible = false;
  bool converged = false;
  int sweeps = 0;
};

// One augmented-Lagrangian run from a given start, within a sweep budget.
ALRunResult run_augmented_lagrangian(const CEProblem& problem,
                                     const SolveOptions& options,
                                     std::vector<Eigen::VectorXd> p, int budget) {
  const int vehicles = problem.num_vehicles();
  ALState state{problem, Eigen::VectorXd::Zero(vehicles), options.mu_initial};
  ALRunResult run;

  const double armijo = 1e-4;
  double previous_violation = std::numeric_limits<double>::infinity();

  while (run.sweeps < budget && !run.converged) {
    Eigen::VectorXd residuals;
    double lagrangian = state.lagrangian(p, &residuals);
    bool natural_stop = false;

    for (int inner = 0; inner < options.max_inner_sweeps; ++inner) {
      const double sweep_start_value = lagrangian;
      double max_step = 0.0;
      for (int block = 0; block < vehicles; ++block) {
        const Eigen::VectorXd grad = state.block_gradient(block, p, residuals);
        double t = 1.0;
        for (int halving = 0; halving < 45; ++halving, t *= 0.5) {
          const Eigen::VectorXd candidate =
              project_to_truncated_simplex(p[block] - t * grad, problem.epsilon);
          const Eigen::VectorXd step = candidate - p[block];
          const double step_norm = step.lpNorm<Eigen::Infinity>();
          if (step_norm < options.step_tol) break;  // pinned by the projection
          const Eigen::VectorXd saved = p[block];
          p[block] = candidate;
          Eigen::VectorXd cand_residuals;
          const double cand_value = state.lagrangian(p, &cand_residuals);
          if (cand_value <= lagrangian + armijo * grad.dot(step)) {
            lagrangian = cand_value;
            residuals = cand_residuals;
            max_step = std::max(max_step, step_norm);
            break;
          }
          p[block] = saved;
        }
      }
      ++run.sweeps;

      // Track the best feasible iterate of this run.
      const double objective_now = ce_objective(problem, p);
      if (residuals.minCoeff() >= -options.constraint_tol &&
          objective_now < run.best_objective) {
        run.best = p;
        run.best_objective = objective_now;
        run.best_residuals = residuals;
        run.found_feasible = true;
      }

      if (max_step <= options.step_tol ||
          sweep_start_value - lagrangian <=
              options.objective_tol * (1.0 + std::abs(sweep_start_value))) {
        natural_stop = true;
        break;
      }
      if (run.sweeps >= budget) break;
    }

    const double violation = std::max(0.0, -residuals.minCoeff());
    for (int i = 0; i < vehicles; ++i)
      state.lambda[i] = std::max(0.0, state.lambda[i] - state.mu * residuals[i]);
    if (violation > options.constraint_tol && violation > 0.25 * previous_violation)
      state.mu = std::min(state.mu * options.mu_growth, options.mu_max);
    previous_violation = violation;

    run.converged = natural_stop && violation <= options.constraint_tol;
  }
  return run;
}

// Initial distribution with the union of a vehicle's conflicting
// trajectories pushed to the floor; the projection restores the simplex.
Eigen::VectorXd yielded_distribution(const CEProblem& problem, int vehicle) {
  Eigen::VectorXd z = problem.vehicles[vehicle].initial;
  for (const auto& risk : problem.risks) {
    for (std::size_t j = 0; j < risk.vehicles.size(); ++j) {
      if (risk.vehicles[j] != vehicle) continue;
      for (const int n : risk.conflicting[j]) z[n] = 0.0;
    }
  }
  return project_to_truncated_simplex(z, problem.epsilon);
}

}  // namespace

Recommendation solve_recommendation(const CEProblem& problem,
                                    const SolveOptions& options) {
  const int vehicles = problem.num_vehicles();
  if (vehicles < 1)
    throw std::invalid_argument("solve_recommendation: no vehicles");
  for (const auto& veh : problem.vehicles) {
    if (veh.initial.size() < 1)
      throw std::invalid_argument("solve_recommendation: empty distribution");
    if (problem.epsilon * veh.initial.size() > 1.0 + 1e-12)
      throw ConfigError("solve_recommendation: epsilon floor infeasible");
  }

  Recommendation result;
  result.distributions.resize(vehicles);
  for (int i = 0; i < vehicles; ++i)
    result.distributions[i] = problem.vehicles[i].initial;
  result.initial_objective = ce_objective(problem, result.distributions);
  result.objective = result.initial_objective;
  result.residuals = Eigen::VectorXd::Zero(vehicles);

  if (problem.num_risks() == 0) {
    result.converged = true;
    return result;
  }

  // The rationality constraints carve a nonconvex feasible set whose lobes
  // (who yields to whom) are not all reachable from the initial point by
  // feasible descent. A fixed family of structured starts covers them:
  // the initial point, each single vehicle yielding, and everyone yielding.
  // Starts are deterministic and share the total sweep budget.
  std::vector<std::vector<Eigen::VectorXd>> starts;
  starts.push_back(result.distributions);
  for (int i = 0; i < vehicles; ++i) {
    auto p = result.distributions;
    p[i] = yielded_distribution(problem, i);
    starts.push_back(std::move(p));
  }
  {
    std::vector<Eigen::VectorXd> p;
    for (int i = 0; i < vehicles; ++i) p.push_back(yielded_distribution(problem, i));
    starts.push_back(std::move(p));
  }

  const int budget = std::max(
      20, options.max_total_sweeps / static_cast<int>(starts.size()));

  // The initial point is feasible with residual 0 by construction, so the
  // result can never be worse than doing nothing.
  std::vector<Eigen::VectorXd> best = result.distributions;
  double best_objective = result.initial_objective;
  Eigen::VectorXd best_residuals = Eigen::VectorXd::Zero(vehicles);
  bool best_converged = true;
  int total_sweeps = 0;

  for (const auto& start : starts) {
    if (total_sweeps >= options.max_total_sweeps) break;
    const int allowance =
        std::min(budget, options.max_total_sweeps - total_sweeps);
    const ALRunResult run =
        run_augmented_lagrangian(problem, options, start, allowance);
    total_sweeps += run.sweeps;
    if (run.found_feasible && run.best_objective < best_objective) {
      best = run.best;
      best_objective = run.best_objective;
      best_residuals = run.best_residuals;
      best_converged = run.converged;
    }
  }

  result.distributions = best;
  result.objective = best_objective;
  result.residuals = best_residuals;
  result.iterations = total_sweeps;
  result.converged = best_converged;
  return result;
}

}  // namespace ceplan

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

// The intersection manager's side of the pipeline: find the cells where
// different vehicles' trajectory libraries overlap, assemble the
// recommendation problem (minimize total collision probability subject to a
// per-vehicle rationality constraint on the epsilon-truncated simplex), and
// solve it with an augmented Lagrangian over projected-gradient sweeps.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ceplan/grid.hpp"
#include "ceplan/library.hpp"
#include "ceplan/preference.hpp"

namespace ceplan {

/// A spatial-temporal cell visited by trajectories of at least two distinct
/// vehicles.
struct RiskPoint {
  Cell cell;
  std::vector<int> participants;  // vehicle ids, ascending
  // conflicting[i]: trajectory indices of participants[i] through the cell,
  // ascending.
  std::vector<std::vector<int>> conflicting;
};

/// All risk points of an occupancy index. One pass over the stored cells,
/// so the cost is linear in the number of inserted trajectory points.
/// Output is ordered by (t, y, x).
std::vector<RiskPoint> locate_risk_points(const OccupancyIndex& index);

/// Sum of a distribution's mass over the given trajectory indices.
double risk_mass(const PreferenceDistribution& p, const std::vector<int>& indices);

/// Yield weighting of a vehicle's risk mass: vehicles close to the risk
/// point (grid distance <= d_tor) are credited for keeping their mass and
/// passing first; far vehicles are credited for moving mass away.
double yield_term(double mass, double distance, double d_tor);

/// The recommendation problem the intersection manager solves each cycle.
struct CEProblem {
  struct Vehicle {
    PreferenceDistribution initial;  // p_o, already on the truncated simplex
    Eigen::VectorXd lengths;         // arc length of each trajectory, meters
  };
  struct Risk {
    std::vector<int> vehicles;                 // slots into CEProblem::vehicles
    std::vector<std::vector<int>> conflicting; // aligned with `vehicles`
    std::vector<double> distance;              // grid distance of each vehicle
  };

  std::vector<Vehicle> vehicles;
  std::vector<Risk> risks;
  double d_tor = 2.0;
  double epsilon = 1e-3;

  int num_vehicles() const { return static_cast<int>(vehicles.size()); }
  int num_risks() const { return static_cast<int>(risks.size()); }
};

/// Assembles a CEProblem from per-vehicle libraries, initial distributions
/// and trajectory lengths. Initial distributions are projected onto the
/// epsilon-truncated simplex up front, so the problem always starts
/// feasible. Distances are Manhattan, from each vehicle's current cell to
/// the risk cell.
CEProblem make_ce_problem(const std::vector<TrajectoryLibrary>& libraries,
                          const std::vector<PreferenceDistribution>& initial,
                          const std::vector<Eigen::VectorXd>& lengths,
                          const std::vector<Eigen::Vector2i>& current_cells,
                          const std::vector<RiskPoint>& risk_points, double d_tor,
                          double epsilon);

/// Joint collision probability at risk point m: product over participants
/// of their risk mass.
double collision_probability(const CEProblem& problem, int risk_index,
                             const std::vector<PreferenceDistribution>& p);

/// Objective: sum of collision probabilities over all risk points.
double ce_objective(const CEProblem& problem,
                    const std::vector<PreferenceDistribution>& p);

std::vector<Eigen::VectorXd> ce_objective_gradient(
    const CEProblem& problem, const std::vector<PreferenceDistribution>& p);

/// Rationality constraint residual of one vehicle: the utility (negative
/// entropy + expected length - yield-weighted collision exposure) of the
/// candidate distribution minus the same expression with this vehicle's
/// terms evaluated at its initial distribution, other vehicles unchanged.
/// Feasible recommendations have residual >= 0; at the initial
/// distributions the residual is identically 0.
double ce_constraint_residual(const CEProblem& problem, int vehicle,
                              const std::vector<PreferenceDistribution>& p);

std::vector<Eigen::VectorXd> ce_constraint_gradient(
    const CEProblem& problem, int vehicle,
    const std::vector<PreferenceDistribution>& p);

/// Euclidean projection onto {p : sum p = 1, p >= epsilon}.
Eigen::VectorXd project_to_truncated_simplex(const Eigen::VectorXd& y, double epsilon);

struct SolveOptions {
  int max_total_sweeps = 500;  // budget across all outer rounds
  int max_inner_sweeps = 20;   // per augmented-Lagrangian round
  double constraint_tol = 1e-6;
  double step_tol = 1e-10;
  double objective_tol = 1e-10;  // relative per-sweep decrease worth pursuing
  double mu_initial = 10.0;
  double mu_growth = 10.0;
  double mu_max = 1e8;
};

struct Recommendation {
  std::vector<PreferenceDistribution> distributions;
  double objective = 0.0;          // at the returned distributions
  double initial_objective = 0.0;  // at the problem's initial distributions
  Eigen::VectorXd residuals;       // per-vehicle constraint residuals
  int iterations = 0;              // projected-gradient sweeps used
  bool converged = false;
};

/// Minimizes total collision probability subject to the per-vehicle
/// rationality constraints and the truncated-simplex constraints.
/// Returns the best feasible iterate seen; since the initial point is
/// feasible with residual 0, the result is never worse than doing nothing.
/// Deterministic: fixed sweep order, no randomization.
Recommendation solve_recommendation(const CEProblem& problem,
                                    const SolveOptions& options = {});

}  // namespace ceplan

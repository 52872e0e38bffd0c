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
#include <string>

namespace ceplan {

struct QPOptions {
  double feasibility_tol = 1e-10;  // violation that triggers activation
  double multiplier_tol = 1e-11;   // negativity that triggers deactivation
  int max_iterations = 300;
};

struct QPOutcome {
  Eigen::VectorXd x;
  bool solved = false;
  double max_violation = 0.0;  // over the inequality rows, signed max
  int iterations = 0;
  std::string message;
};

/// Dense convex QP:  min 1/2 x'Qx + c'x  s.t.  A_eq x = b_eq, A_in x <= b_in.
///
/// Equalities are eliminated through an orthonormal null-space basis (SVD),
/// then a primal-dual active-set iteration runs on the reduced problem:
/// most-violated rows are activated, rows with negative multipliers are
/// released, ties resolved by lowest index so the pivot sequence is
/// deterministic. The reduced Hessian must be positive definite, which
/// holds whenever the equalities pin down position, velocity and
/// acceleration at the start plus a terminal position (any zero-jerk
/// feasible variation is then identically zero).
QPOutcome solve_equality_inequality_qp(const Eigen::MatrixXd& Q,
                                       const Eigen::VectorXd& c,
                                       const Eigen::MatrixXd& A_eq,
                                       const Eigen::VectorXd& b_eq,
                                       const Eigen::MatrixXd& A_in,
                                       const Eigen::VectorXd& b_in,
                                       const QPOptions& options = {});

}  // namespace ceplan

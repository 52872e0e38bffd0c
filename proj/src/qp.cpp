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

#include "ceplan/qp.hpp"

#include <algorithm>
#include <vector>

#include "ceplan/errors.hpp"

namespace ceplan {

namespace {

struct ReducedProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd C;
  Eigen::VectorXd d;
  std::vector<int> row_map;  // reduced row -> original inequality row
};

}  // namespace

QPOutcome solve_equality_inequality_qp(const Eigen::MatrixXd& Q,
                                       const Eigen::VectorXd& c,
                                       const Eigen::MatrixXd& A_eq,
                                       const Eigen::VectorXd& b_eq,
                                       const Eigen::MatrixXd& A_in,
                                       const Eigen::VectorXd& b_in,
                                       const QPOptions& options) {
  const int vars = static_cast<int>(Q.rows());
  QPOutcome outcome;

  Eigen::VectorXd x_particular = Eigen::VectorXd::Zero(vars);
  Eigen::MatrixXd null_basis = Eigen::MatrixXd::Identity(vars, vars);

  if (A_eq.rows() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A_eq,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double tol = 1e-12 * svd.singularValues().maxCoeff() *
                       std::max(A_eq.rows(), A_eq.cols());
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > tol) ++rank;
    svd.setThreshold(Eigen::Default);
    x_particular = svd.solve(b_eq);
    const double eq_residual = (A_eq * x_particular - b_eq).lpNorm<Eigen::Infinity>();
    if (eq_residual > 1e-8 * (1.0 + b_eq.lpNorm<Eigen::Infinity>()))
      throw ConditioningError("qp: equality constraints are inconsistent");
    if (rank == vars) {
      // Fully determined; only feasibility of the inequalities remains.
      outcome.x = x_particular;
      outcome.max_violation =
          A_in.rows() > 0 ? (A_in * outcome.x - b_in).maxCoeff() : 0.0;
      outcome.solved = outcome.max_violation <= options.feasibility_tol;
      outcome.message = outcome.solved ? "determined by equalities"
                                       : "equalities violate inequalities";
      return outcome;
    }
    null_basis = svd.matrixV().rightCols(vars - rank);
  }

  ReducedProblem reduced;
  reduced.H = null_basis.transpose() * Q * null_basis;
  reduced.H = 0.5 * (reduced.H + reduced.H.transpose()).eval();
  reduced.g = null_basis.transpose() * (Q * x_particular + c);

  if (A_in.rows() > 0) {
    const Eigen::MatrixXd C_full = A_in * null_basis;
    const Eigen::VectorXd d_full = b_in - A_in * x_particular;
    for (int r = 0; r < C_full.rows(); ++r) {
      if (C_full.row(r).lpNorm<Eigen::Infinity>() <= 1e-12) {
        if (d_full[r] < -options.feasibility_tol) {
          outcome.message = "qp: fixed subspace violates an inequality";
          outcome.max_violation = -d_full[r];
          return outcome;
        }
        continue;  // row does not constrain the free subspace
      }
      reduced.C.conservativeResize(reduced.C.rows() + 1, C_full.cols());
      reduced.C.row(reduced.C.rows() - 1) = C_full.row(r);
      reduced.d.conservativeResize(reduced.d.size() + 1);
      reduced.d[reduced.d.size() - 1] = d_full[r];
      reduced.row_map.push_back(r);
    }
  }

  const int free_dims = static_cast<int>(reduced.H.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(reduced.H);
  if (llt.info() != Eigen::Success) {
    // One retry with a relative ridge before giving up.
    const double ridge = 1e-12 * std::max(1.0, reduced.H.trace() / free_dims);
    reduced.H.diagonal().array() += ridge;
    llt.compute(reduced.H);
    if (llt.info() != Eigen::Success)
      throw ConditioningError("qp: reduced Hessian is not positive definite");
  }

  std::vector<int> active;  // working set, in activation order
  Eigen::VectorXd y = llt.solve(-reduced.g);

  const int rows = static_cast<int>(reduced.C.rows());
  std::vector<char> banned(rows, 0);  // rows dependent on the working set
  for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
    outcome.iterations = iteration;

    if (active.empty()) {
      y = llt.solve(-reduced.g);
    } else {
      const int a = static_cast<int>(active.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(free_dims + a, free_dims + a);
      kkt.topLeftCorner(free_dims, free_dims) = reduced.H;
      for (int j = 0; j < a; ++j) {
        kkt.block(0, free_dims + j, free_dims, 1) =
            reduced.C.row(active[j]).transpose();
        kkt.block(free_dims + j, 0, 1, free_dims) = reduced.C.row(active[j]);
      }
      Eigen::VectorXd rhs(free_dims + a);
      rhs.head(free_dims) = -reduced.g;
      for (int j = 0; j < a; ++j) rhs[free_dims + j] = reduced.d[active[j]];

      Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
      if (!lu.isInvertible()) {
        // The newest constraint is dependent on the working set; drop it.
        banned[active.back()] = 1;
        active.pop_back();
        continue;
      }
      const Eigen::VectorXd solution = lu.solve(rhs);
      y = solution.head(free_dims);
      const Eigen::VectorXd multipliers = solution.tail(a);

      int release = -1;
      double most_negative = -options.multiplier_tol;
      for (int j = 0; j < a; ++j) {
        if (multipliers[j] < most_negative) {
          most_negative = multipliers[j];
          release = j;
        }
      }
      if (release >= 0) {
        active.erase(active.begin() + release);
        std::fill(banned.begin(), banned.end(), 0);  // dependencies may change
        continue;
      }
    }

    // Working set is dual feasible; look for primal violations.
    int worst = -1;
    double worst_violation = options.feasibility_tol;
    for (int r = 0; r < rows; ++r) {
      if (banned[r]) continue;
      if (std::find(active.begin(), active.end(), r) != active.end()) continue;
      const double violation = reduced.C.row(r).dot(y) - reduced.d[r];
      if (violation > worst_violation) {
        worst_violation = violation;
        worst = r;
      }
    }
    if (worst < 0) {
      outcome.x = x_particular + null_basis * y;
      outcome.max_violation =
          A_in.rows() > 0 ? (A_in * outcome.x - b_in).maxCoeff() : 0.0;
      // A dependent row that stayed violated means the point is not primal
      // feasible after all.
      double banned_violation = 0.0;
      for (int r = 0; r < rows; ++r)
        if (banned[r])
          banned_violation =
              std::max(banned_violation, reduced.C.row(r).dot(y) - reduced.d[r]);
      outcome.solved = banned_violation <= options.feasibility_tol;
      outcome.message = outcome.solved ? "optimal" : "qp: dependent row violated";
      return outcome;
    }
    active.push_back(worst);
  }

  outcome.x = x_particular + null_basis * y;
  outcome.max_violation = A_in.rows() > 0 ? (A_in * outcome.x - b_in).maxCoeff() : 0.0;
  outcome.solved = false;
  outcome.message = "qp: active-set iteration budget exhausted";
  return outcome;
}

}  // namespace ceplan

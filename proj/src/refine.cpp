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

#include "ceplan/refine.hpp"

#include <cmath>
#include <string>

#include "ceplan/qp.hpp"

namespace ceplan {

namespace {

constexpr int kC = kPolynomialCoeffs;

// Row of basis values (sigma^q scaled by falling factorials) for the
// order-th derivative in normalized time.
Eigen::RowVectorXd basis_row(double sigma, int order) {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(kC);
  for (int q = order; q < kC; ++q) {
    double factor = 1.0;
    for (int j = 0; j < order; ++j) factor *= static_cast<double>(q - j);
    row[q] = factor * std::pow(sigma, q - order);
  }
  return row;
}

// Integral over [0,1] of the squared third derivative in normalized time.
Eigen::MatrixXd jerk_gram() {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(kC, kC);
  for (int j = 3; j < kC; ++j) {
    const double cj = static_cast<double>(j * (j - 1) * (j - 2));
    for (int k = 3; k < kC; ++k) {
      const double ck = static_cast<double>(k * (k - 1) * (k - 2));
      G(j, k) = cj * ck / static_cast<double>(j + k - 5);
    }
  }
  return G;
}

}  // namespace

Eigen::Vector2d PolynomialSegment::evaluate_local(double tau, int order) const {
  const double sigma = duration > 0.0 ? tau / duration : 0.0;
  const Eigen::RowVectorXd row = basis_row(sigma, order);
  const double scale = std::pow(duration, -order);
  return (row * coeffs).transpose() * scale;
}

double PiecewiseTrajectory::total_duration() const {
  double total = 0.0;
  for (const auto& segment : segments) total += segment.duration;
  return total;
}

Eigen::Vector2d PiecewiseTrajectory::evaluate(double t, int order) const {
  if (segments.empty()) throw DomainError("evaluate: empty trajectory");
  if (order < 0 || order > 3)
    throw std::invalid_argument("evaluate: derivative order must be 0..3");
  const double total = total_duration();
  const double slack = 1e-9 * (1.0 + total);
  if (t < -slack || t > total + slack)
    throw DomainError("evaluate: time " + std::to_string(t) +
                      " outside [0, " + std::to_string(total) + "]");
  t = std::min(std::max(t, 0.0), total);

  double offset = 0.0;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    if (t < offset + segments[i].duration)  // left-closed at junctions
      return segments[i].evaluate_local(t - offset, order);
    offset += segments[i].duration;
  }
  return segments.back().evaluate_local(t - offset, order);
}

QPResult refine_trajectory(const Corridor& corridor, const BoundaryState& start,
                           const EndCondition& end, int samples_per_segment,
                           const std::vector<TimedPosition>& pins) {
  const int n = corridor.size();
  if (n < 1) throw std::invalid_argument("refine_trajectory: empty corridor");
  if (samples_per_segment < 2)
    throw std::invalid_argument("refine_trajectory: need at least 2 samples");
  for (const auto& segment : corridor.segments)
    if (!(segment.duration > 0.0))
      throw std::invalid_argument("refine_trajectory: non-positive duration");
  if (!corridor.segments.front().box.contains(start.position))
    throw std::invalid_argument("refine_trajectory: start outside first rectangle");
  if (!corridor.segments.back().box.contains(end.position))
    throw std::invalid_argument("refine_trajectory: end outside last rectangle");

  const int vars = kC * n;
  const Eigen::MatrixXd gram = jerk_gram();

  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(vars, vars);
  for (int i = 0; i < n; ++i) {
    const double dt = corridor.segments[i].duration;
    Q.block(i * kC, i * kC, kC, kC) = gram * std::pow(dt, -5);
  }

  // Equalities: start state (3), junction continuity (4 per junction), end
  // position, optional end velocity/acceleration, interior position pins.
  const int num_end = 1 + (end.velocity ? 1 : 0) + (end.acceleration ? 1 : 0);
  const int num_eq = 3 + 4 * (n - 1) + num_end + static_cast<int>(pins.size());
  Eigen::MatrixXd A_eq = Eigen::MatrixXd::Zero(num_eq, vars);
  Eigen::MatrixXd b_eq_xy = Eigen::MatrixXd::Zero(num_eq, 2);

  int row = 0;
  const double dt0 = corridor.segments.front().duration;
  for (int order = 0; order < 3; ++order) {
    A_eq.block(row, 0, 1, kC) = basis_row(0.0, order) * std::pow(dt0, -order);
    ++row;
  }
  b_eq_xy.row(0) = start.position.transpose();
  b_eq_xy.row(1) = start.velocity.transpose();
  b_eq_xy.row(2) = start.acceleration.transpose();

  for (int i = 0; i + 1 < n; ++i) {
    const double dt_left = corridor.segments[i].duration;
    const double dt_right = corridor.segments[i + 1].duration;
    for (int order = 0; order <= 3; ++order) {
      A_eq.block(row, i * kC, 1, kC) =
          basis_row(1.0, order) * std::pow(dt_left, -order);
      A_eq.block(row, (i + 1) * kC, 1, kC) =
          -basis_row(0.0, order) * std::pow(dt_right, -order);
      ++row;
    }
  }

  const double dtn = corridor.segments.back().duration;
  const int last = (n - 1) * kC;
  A_eq.block(row, last, 1, kC) = basis_row(1.0, 0);
  b_eq_xy.row(row) = end.position.transpose();
  ++row;
  if (end.velocity) {
    A_eq.block(row, last, 1, kC) = basis_row(1.0, 1) / dtn;
    b_eq_xy.row(row) = end.velocity->transpose();
    ++row;
  }
  if (end.acceleration) {
    A_eq.block(row, last, 1, kC) = basis_row(1.0, 2) / (dtn * dtn);
    b_eq_xy.row(row) = end.acceleration->transpose();
    ++row;
  }

  const double total_duration = [&] {
    double total = 0.0;
    for (const auto& segment : corridor.segments) total += segment.duration;
    return total;
  }();
  for (const auto& pin : pins) {
    if (pin.time < -1e-9 || pin.time > total_duration + 1e-9)
      throw std::invalid_argument("refine_trajectory: pin outside time span");
    // Locate the owning segment, left-closed at junctions.
    int segment = n - 1;
    double offset = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      if (pin.time < offset + corridor.segments[i].duration) {
        segment = i;
        break;
      }
      offset += corridor.segments[i].duration;
    }
    const double sigma = std::min(
        1.0, std::max(0.0, (pin.time - offset) / corridor.segments[segment].duration));
    A_eq.block(row, segment * kC, 1, kC) = basis_row(sigma, 0);
    b_eq_xy.row(row) = pin.position.transpose();
    ++row;
  }

  // Containment at uniformly spaced sample times, endpoints included:
  // lower <= phi(sigma) <= upper per axis.
  const int rows_per_axis = 2 * n * samples_per_segment;
  Eigen::MatrixXd A_in = Eigen::MatrixXd::Zero(rows_per_axis, vars);
  Eigen::MatrixXd b_in_xy = Eigen::MatrixXd::Zero(rows_per_axis, 2);
  int in_row = 0;
  for (int i = 0; i < n; ++i) {
    const auto& box = corridor.segments[i].box;
    for (int s = 0; s < samples_per_segment; ++s) {
      const double sigma = static_cast<double>(s) / (samples_per_segment - 1);
      const Eigen::RowVectorXd basis = basis_row(sigma, 0);
      A_in.block(in_row, i * kC, 1, kC) = basis;
      b_in_xy(in_row, 0) = box.max().x();
      b_in_xy(in_row, 1) = box.max().y();
      ++in_row;
      A_in.block(in_row, i * kC, 1, kC) = -basis;
      b_in_xy(in_row, 0) = -box.min().x();
      b_in_xy(in_row, 1) = -box.min().y();
      ++in_row;
    }
  }

  QPResult result;
  result.trajectory.segments.resize(n);
  for (int i = 0; i < n; ++i)
    result.trajectory.segments[i].duration = corridor.segments[i].duration;

  bool all_solved = true;
  for (int axis = 0; axis < 2; ++axis) {
    const QPOutcome outcome = solve_equality_inequality_qp(
        Q, Eigen::VectorXd::Zero(vars), A_eq, b_eq_xy.col(axis), A_in,
        b_in_xy.col(axis));
    result.iterations += outcome.iterations;
    result.max_violation = std::max(result.max_violation, outcome.max_violation);
    if (!outcome.solved) {
      all_solved = false;
      continue;
    }
    result.objective += outcome.x.dot(Q * outcome.x);
    for (int i = 0; i < n; ++i)
      result.trajectory.segments[i].coeffs.col(axis) =
          outcome.x.segment(i * kC, kC);
  }
  // The objective carries no 1/2 factor; it is the plain squared-jerk
  // integral, so no rescaling of x'Qx is needed.
  result.feasible = all_solved && result.max_violation <= 1e-6;
  return result;
}

}  // namespace ceplan

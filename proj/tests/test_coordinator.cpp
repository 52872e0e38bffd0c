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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "ceplan/coordinator.hpp"
#include "ceplan/rng.hpp"
#include "oracles.hpp"

using namespace ceplan;

namespace {

GridSpec make_spec(int size, int horizon) {
  GridSpec spec;
  spec.spatial_resolution = 0.3;
  spec.temporal_resolution = 0.6;
  spec.width = size;
  spec.height = size;
  spec.horizon = horizon;
  return spec;
}

// Random distribution strictly inside the truncated simplex.
Eigen::VectorXd random_interior(int k, double epsilon, std::mt19937_64& rng) {
  Eigen::VectorXd raw(k);
  for (int i = 0; i < k; ++i) raw[i] = 0.05 + uniform01(rng);
  raw /= raw.sum();
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(k, 1.0 / k);
  Eigen::VectorXd p = 0.6 * raw + 0.4 * uniform;
  p /= p.sum();
  for (int i = 0; i < k; ++i) REQUIRE(p[i] > epsilon + 1e-4);
  return p;
}

// Random structured problem over abstract trajectory index sets.
CEProblem random_problem(std::mt19937_64& rng, int max_vehicles = 4,
                         double epsilon = 1e-3) {
  CEProblem problem;
  problem.epsilon = epsilon;
  problem.d_tor = 2.0;
  const int vehicles = 2 + static_cast<int>(uniform01(rng) * (max_vehicles - 1));
  std::vector<int> sizes;
  for (int i = 0; i < vehicles; ++i) {
    const int k = 2 + static_cast<int>(uniform01(rng) * 5);
    sizes.push_back(k);
    CEProblem::Vehicle veh;
    Eigen::VectorXd scores(k);
    for (int n = 0; n < k; ++n) scores[n] = uniform01(rng) * 2.0;
    veh.initial = project_to_truncated_simplex(
        (scores.array().exp() / scores.array().exp().sum()).matrix(), epsilon);
    veh.lengths = Eigen::VectorXd::Zero(k);
    for (int n = 0; n < k; ++n) veh.lengths[n] = 0.3 + uniform01(rng) * 1.5;
    problem.vehicles.push_back(veh);
  }
  const int risks = 1 + static_cast<int>(uniform01(rng) * 5);
  for (int m = 0; m < risks; ++m) {
    CEProblem::Risk risk;
    std::vector<int> order(vehicles);
    for (int i = 0; i < vehicles; ++i) order[i] = i;
    for (int i = vehicles - 1; i > 0; --i)
      std::swap(order[i], order[static_cast<int>(uniform01(rng) * (i + 1))]);
    const int parts =
        2 + static_cast<int>(uniform01(rng) * std::max(0, vehicles - 1));
    for (int j = 0; j < std::min(parts, vehicles); ++j) {
      const int slot = order[j];
      std::vector<int> conflict;
      for (int n = 0; n < sizes[slot]; ++n)
        if (uniform01(rng) < 0.4) conflict.push_back(n);
      if (conflict.empty()) conflict.push_back(0);
      risk.vehicles.push_back(slot);
      risk.conflicting.push_back(conflict);
      risk.distance.push_back(
          static_cast<double>(static_cast<int>(uniform01(rng) * 6)));
    }
    problem.risks.push_back(risk);
  }
  return problem;
}

std::vector<Eigen::VectorXd> initial_of(const CEProblem& problem) {
  std::vector<Eigen::VectorXd> p;
  for (const auto& veh : problem.vehicles) p.push_back(veh.initial);
  return p;
}

}  // namespace

TEST_CASE("risk point localization with crossing libraries") {
  const GridSpec grid = make_spec(12, 3);

  GridPath horizontal, vertical;
  for (int i = 0; i < 12; ++i) {
    horizontal.push_back({i, 5});
    vertical.push_back({5, i});
  }
  auto lib1 = generate_trajectory_library(horizontal, 3, 2, 3, 1);
  auto lib2 = generate_trajectory_library(vertical, 3, 2, 3, 2);

  OccupancyIndex index(grid);
  for (int n = 0; n < lib1.size(); ++n)
    index.insert_trajectory(1, n, lib1.trajectories[n]);
  for (int n = 0; n < lib2.size(); ++n)
    index.insert_trajectory(2, n, lib2.trajectories[n]);

  const auto points = locate_risk_points(index);
  const auto oracle = oracles::brute_force_risk_points({lib1, lib2});
  REQUIRE(points.size() == oracle.size());
  for (const auto& rp : points) {
    const auto key = std::make_tuple(rp.cell.t, rp.cell.y, rp.cell.x);
    REQUIRE(oracle.count(key) == 1);
    const auto& expected = oracle.at(key);
    REQUIRE(rp.participants.size() == expected.conflicting.size());
    for (std::size_t j = 0; j < rp.participants.size(); ++j) {
      CHECK(std::set<int>(rp.conflicting[j].begin(), rp.conflicting[j].end()) ==
            expected.conflicting.at(rp.participants[j]));
    }
  }
}

TEST_CASE("disjoint libraries produce no risk points") {
  const GridSpec spec = make_spec(10, 4);
  GridPath a, b;
  for (int i = 0; i < 10; ++i) {
    a.push_back({i, 1});
    b.push_back({i, 7});
  }
  auto lib1 = generate_trajectory_library(a, 4, 2, 0, 1);
  auto lib2 = generate_trajectory_library(b, 4, 2, 0, 2);
  OccupancyIndex index(spec);
  for (int n = 0; n < lib1.size(); ++n)
    index.insert_trajectory(1, n, lib1.trajectories[n]);
  for (int n = 0; n < lib2.size(); ++n)
    index.insert_trajectory(2, n, lib2.trajectories[n]);
  CHECK(locate_risk_points(index).empty());
}

TEST_CASE("risk points equal the brute-force oracle on random scenes") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int horizon = 3 + static_cast<int>(uniform01(rng) * 4);
    const GridSpec spec = make_spec(9, horizon);
    const int vehicles = 2 + static_cast<int>(uniform01(rng) * 3);

    std::vector<TrajectoryLibrary> libraries;
    OccupancyIndex index(spec);
    for (int v = 0; v < vehicles; ++v) {
      GridPath path;
      Eigen::Vector2i cell(static_cast<int>(uniform01(rng) * 9),
                           static_cast<int>(uniform01(rng) * 9));
      path.push_back(cell);
      while (static_cast<int>(path.size()) < 11) {
        Eigen::Vector2i next = cell;
        const int move = static_cast<int>(uniform01(rng) * 4);
        if (move == 0) next.x() += 1;
        if (move == 1) next.x() -= 1;
        if (move == 2) next.y() += 1;
        if (move == 3) next.y() -= 1;
        if (in_bounds(next, spec) && next != path.back()) {
          path.push_back(next);
          cell = next;
        }
      }
      auto library = generate_trajectory_library(
          path, horizon, 1 + static_cast<int>(uniform01(rng) * 2), 0, v + 1);
      for (int n = 0; n < library.size(); ++n)
        index.insert_trajectory(v + 1, n, library.trajectories[n]);
      libraries.push_back(std::move(library));
    }

    const auto points = locate_risk_points(index);
    const auto oracle = oracles::brute_force_risk_points(libraries);
    REQUIRE(points.size() == oracle.size());
    for (const auto& rp : points) {
      const auto& expected = oracle.at({rp.cell.t, rp.cell.y, rp.cell.x});
      REQUIRE(rp.participants.size() == expected.conflicting.size());
      for (std::size_t j = 0; j < rp.participants.size(); ++j) {
        CHECK(std::set<int>(rp.conflicting[j].begin(), rp.conflicting[j].end()) ==
              expected.conflicting.at(rp.participants[j]));
      }
    }
  }
}

TEST_CASE("risk mass, collision probability and yield term") {
  const Eigen::VectorXd uniform13 = Eigen::VectorXd::Constant(13, 1.0 / 13.0);
  CHECK(risk_mass(uniform13, {0, 5}) == doctest::Approx(2.0 / 13.0));
  CHECK(risk_mass(uniform13, {}) == doctest::Approx(0.0));

  std::mt19937_64 rng(3);
  Eigen::VectorXd arbitrary(6);
  for (int i = 0; i < 6; ++i) arbitrary[i] = uniform01(rng);
  arbitrary /= arbitrary.sum();
  const double direct = arbitrary[1] + arbitrary[3] + arbitrary[4];
  CHECK(risk_mass(arbitrary, {1, 3, 4}) == doctest::Approx(direct).epsilon(1e-15));

  CEProblem problem;
  for (int i = 0; i < 3; ++i) {
    CEProblem::Vehicle veh;
    veh.initial = uniform13;
    veh.lengths = Eigen::VectorXd::Constant(13, 1.0);
    problem.vehicles.push_back(veh);
  }
  CEProblem::Risk risk;
  risk.vehicles = {0, 1};
  risk.conflicting = {{0, 1}, {2, 3}};
  risk.distance = {3.0, 3.0};
  problem.risks.push_back(risk);
  CHECK(collision_probability(problem, 0, initial_of(problem)) ==
        doctest::Approx(4.0 / 169.0));

  problem.risks[0].conflicting[0] = {};
  CHECK(collision_probability(problem, 0, initial_of(problem)) ==
        doctest::Approx(0.0));

  CEProblem::Risk triple;
  triple.vehicles = {0, 1, 2};
  triple.conflicting = {{0}, {1, 2}, {4}};
  triple.distance = {1.0, 2.0, 5.0};
  problem.risks = {triple};
  const double expect = (1.0 / 13.0) * (2.0 / 13.0) * (1.0 / 13.0);
  CHECK(collision_probability(problem, 0, initial_of(problem)) ==
        doctest::Approx(expect).epsilon(1e-15));

  CHECK(yield_term(0.4, 1.0, 2.0) == doctest::Approx(0.6));
  CHECK(yield_term(0.4, 3.0, 2.0) == doctest::Approx(0.4));
  CHECK(yield_term(0.5, 0.0, 2.0) == doctest::Approx(0.5));
  CHECK(yield_term(0.5, 9.0, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("constraint residual is exactly zero at the initial point") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const CEProblem problem = random_problem(rng);
    const auto p = initial_of(problem);
    for (int i = 0; i < problem.num_vehicles(); ++i)
      CHECK(std::abs(ce_constraint_residual(problem, i, p)) <= 1e-12);
  }
}

TEST_CASE("constraint residual matches the reference transliteration") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const CEProblem problem = random_problem(rng);
    std::vector<Eigen::VectorXd> p;
    for (const auto& veh : problem.vehicles)
      p.push_back(random_interior(static_cast<int>(veh.initial.size()),
                                  problem.epsilon, rng));
    for (int i = 0; i < problem.num_vehicles(); ++i) {
      const double got = ce_constraint_residual(problem, i, p);
      const double expected = oracles::ce_residual_reference(problem, i, p);
      CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("gradients match central finite differences") {
  std::mt19937_64 rng(37);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const CEProblem problem = random_problem(rng);
    std::vector<Eigen::VectorXd> p;
    for (const auto& veh : problem.vehicles)
      p.push_back(random_interior(static_cast<int>(veh.initial.size()),
                                  problem.epsilon, rng));

    const auto check_gradient = [&](auto&& value,
                                    const std::vector<Eigen::VectorXd>& grad) {
      for (int b = 0; b < problem.num_vehicles(); ++b) {
        for (int n = 0; n < p[b].size(); ++n) {
          auto plus = p, minus = p;
          plus[b][n] += h;
          minus[b][n] -= h;
          const double fd = (value(plus) - value(minus)) / (2.0 * h);
          const double analytic = grad[b][n];
          const double scale = std::max({1.0, std::abs(analytic), std::abs(fd)});
          CHECK(std::abs(analytic - fd) / scale <= 1e-5);
        }
      }
    };

    check_gradient([&](const auto& q) { return ce_objective(problem, q); },
                   ce_objective_gradient(problem, p));
    for (int i = 0; i < problem.num_vehicles(); ++i) {
      check_gradient(
          [&](const auto& q) { return ce_constraint_residual(problem, i, q); },
          ce_constraint_gradient(problem, i, p));
    }
  }
}

TEST_CASE("truncated simplex projection") {
  std::mt19937_64 rng(41);

  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(uniform01(rng) * 10);
    const double eps = uniform01(rng) * 0.5 / k;
    Eigen::VectorXd y(k);
    for (int i = 0; i < k; ++i) y[i] = (uniform01(rng) - 0.3) * 3.0;
    const Eigen::VectorXd p = project_to_truncated_simplex(y, eps);

    CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
    CHECK(p.minCoeff() >= eps - 1e-15);

    // KKT: free coordinates share one offset theta; clamped coordinates
    // would fall below the floor without the clamp.
    double theta = 0.0;
    int free_count = 0;
    for (int i = 0; i < k; ++i) {
      if (p[i] > eps + 1e-12) {
        theta += y[i] - p[i];
        ++free_count;
      }
    }
    if (free_count > 0) {
      theta /= free_count;
      for (int i = 0; i < k; ++i) {
        if (p[i] > eps + 1e-12) {
          CHECK(std::abs((y[i] - theta) - p[i]) <= 1e-9);
        } else {
          CHECK(y[i] - theta <= eps + 1e-9);
        }
      }
    }

    const Eigen::VectorXd q = project_to_truncated_simplex(p, eps);
    CHECK((q - p).lpNorm<Eigen::Infinity>() <= 1e-12);
  }

  Eigen::VectorXd inside(3);
  inside << 0.2, 0.3, 0.5;
  const auto same = project_to_truncated_simplex(inside, 0.05);
  CHECK((same - inside).lpNorm<Eigen::Infinity>() <= 1e-15);

  CHECK_THROWS_AS(project_to_truncated_simplex(inside, 0.5), ConfigError);
}

TEST_CASE("solver returns the initial point when there are no risks") {
  std::mt19937_64 rng(43);
  CEProblem problem = random_problem(rng);
  problem.risks.clear();
  const auto result = solve_recommendation(problem);
  CHECK(result.converged);
  CHECK(result.objective == doctest::Approx(0.0));
  for (int i = 0; i < problem.num_vehicles(); ++i)
    CHECK((result.distributions[i] - problem.vehicles[i].initial)
              .lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
}

TEST_CASE("solver soundness on random problems") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const CEProblem problem = random_problem(rng);
    const auto result = solve_recommendation(problem);

    CHECK(result.objective <= result.initial_objective + 1e-9);
    CHECK(result.residuals.minCoeff() >= -1e-6);
    for (int i = 0; i < problem.num_vehicles(); ++i) {
      CHECK(std::abs(result.distributions[i].sum() - 1.0) <= 1e-9);
      CHECK(result.distributions[i].minCoeff() >= problem.epsilon - 1e-9);
      CHECK(ce_constraint_residual(problem, i, result.distributions) ==
            doctest::Approx(result.residuals[i]).epsilon(1e-9));
    }
  }
}

namespace {

// Exhaustive feasible grid search for 2-vehicle, 2-trajectory toys; the
// grid includes the epsilon boundary values.
double toy_grid_search(const CEProblem& problem, double step = 0.01) {
  const double eps = problem.epsilon;
  std::vector<double> values;
  values.push_back(eps);
  for (double x = step; x < 1.0 - eps; x += step) values.push_back(x);
  values.push_back(1.0 - eps);

  double best = std::numeric_limits<double>::infinity();
  std::vector<Eigen::VectorXd> p(2, Eigen::VectorXd(2));
  for (const double x1 : values) {
    for (const double x2 : values) {
      p[0] << x1, 1.0 - x1;
      p[1] << x2, 1.0 - x2;
      bool feasible = true;
      for (int i = 0; i < 2 && feasible; ++i)
        if (ce_constraint_residual(problem, i, p) < 0.0) feasible = false;
      if (!feasible) continue;
      best = std::min(best, ce_objective(problem, p));
    }
  }
  return best;
}

CEProblem toy_problem(std::mt19937_64& rng, double d1, double d2) {
  CEProblem problem;
  problem.epsilon = 1e-3;
  problem.d_tor = 2.0;
  for (int i = 0; i < 2; ++i) {
    CEProblem::Vehicle veh;
    Eigen::VectorXd initial(2);
    const double a = 0.55 + 0.35 * uniform01(rng);
    initial << a, 1.0 - a;
    veh.initial = project_to_truncated_simplex(initial, problem.epsilon);
    veh.lengths = Eigen::VectorXd(2);
    veh.lengths << 1.5, 1.2 - 0.2 * uniform01(rng);
    problem.vehicles.push_back(veh);
  }
  CEProblem::Risk risk;
  risk.vehicles = {0, 1};
  risk.conflicting = {{0}, {0}};  // each vehicle's preferred trajectory
  risk.distance = {d1, d2};
  problem.risks.push_back(risk);
  return problem;
}

}  // namespace

TEST_CASE("solver matches exhaustive grid search on toy instances") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 8; ++trial) {
    const double d1 = trial % 2 == 0 ? 1.0 : 4.0;
    const double d2 = trial % 3 == 0 ? 1.0 : 5.0;
    const CEProblem problem = toy_problem(rng, d1, d2);
    const auto result = solve_recommendation(problem);
    const double grid_best = toy_grid_search(problem);

    REQUIRE(std::isfinite(grid_best));
    CHECK(result.objective <= grid_best + 1e-3);
    CHECK(result.objective >= grid_best - 1e-3);
  }
}

TEST_CASE("near vehicle keeps risk mass, far vehicle yields") {
  // Vehicle 0 sits one cell from the conflict; its alternative trajectory
  // is much shorter, so yielding would cost it real efficiency and the
  // rationality constraint blocks it. Vehicle 1 is far with a cheap
  // alternative.
  CEProblem problem;
  problem.epsilon = 1e-3;
  problem.d_tor = 2.0;
  {
    CEProblem::Vehicle veh;
    veh.initial = Eigen::VectorXd(2);
    veh.initial << 0.7, 0.3;
    veh.lengths = Eigen::VectorXd(2);
    veh.lengths << 1.5, 0.5;
    problem.vehicles.push_back(veh);
  }
  {
    CEProblem::Vehicle veh;
    veh.initial = Eigen::VectorXd(2);
    veh.initial << 0.7, 0.3;
    veh.lengths = Eigen::VectorXd(2);
    veh.lengths << 1.5, 1.35;
    problem.vehicles.push_back(veh);
  }
  CEProblem::Risk risk;
  risk.vehicles = {0, 1};
  risk.conflicting = {{0}, {0}};
  risk.distance = {1.0, 5.0};  // vehicle 0 near, vehicle 1 far
  problem.risks.push_back(risk);

  const auto result = solve_recommendation(problem);
  const double mass0_initial = problem.vehicles[0].initial[0];
  const double mass1_initial = problem.vehicles[1].initial[0];
  CHECK(result.distributions[0][0] >= mass0_initial - 1e-6);
  CHECK(result.distributions[1][0] <= mass1_initial + 1e-6);
  CHECK(result.distributions[1][0] < mass1_initial - 1e-3);

  // The exhaustive feasible grid search agrees on who yields.
  const double eps = problem.epsilon;
  std::vector<double> values{eps};
  for (double x = 0.01; x < 1.0 - eps; x += 0.01) values.push_back(x);
  values.push_back(1.0 - eps);
  double best = std::numeric_limits<double>::infinity();
  double arg0 = 0.0, arg1 = 0.0;
  std::vector<Eigen::VectorXd> p(2, Eigen::VectorXd(2));
  for (const double x0 : values) {
    for (const double x1 : values) {
      p[0] << x0, 1.0 - x0;
      p[1] << x1, 1.0 - x1;
      if (ce_constraint_residual(problem, 0, p) < 0.0) continue;
      if (ce_constraint_residual(problem, 1, p) < 0.0) continue;
      const double objective = ce_objective(problem, p);
      if (objective < best) {
        best = objective;
        arg0 = x0;
        arg1 = x1;
      }
    }
  }
  CHECK(arg0 >= mass0_initial - 0.011);  // near vehicle keeps its mass
  CHECK(arg1 < mass1_initial - 0.1);     // far vehicle sheds its mass
  CHECK(result.objective <= best + 1e-3);
}

TEST_CASE("epsilon floor infeasibility raises a configuration error") {
  std::mt19937_64 rng(61);
  CEProblem problem = random_problem(rng);
  problem.epsilon = 0.9;
  CHECK_THROWS_AS(solve_recommendation(problem), ConfigError);
}

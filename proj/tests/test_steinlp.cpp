// Copyright 2026 The steinbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "steinbench/steinlp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "doctest.h"
#include "steinbench/errors.hpp"
#include "steinbench/targets.hpp"

using namespace steinbench;

namespace {

TargetModel standard_normal(int d) {
  GaussianMixtureParams p;
  p.weights = Eigen::VectorXd::Ones(1);
  p.means = {Eigen::VectorXd::Zero(d)};
  p.cov = Eigen::MatrixXd::Identity(d, d);
  return make_gmm_target(p);
}

WeightedSample point_mass(const Eigen::VectorXd& x) {
  Eigen::MatrixXd pts(1, x.size());
  pts.row(0) = x;
  return WeightedSample::uniform(pts);
}

// Same vertex-enumeration oracle as in the simplex tests; small LPs only.
double brute_force_optimum(const SparseLp& lp) {
  const int k = lp.num_cols;
  std::vector<Eigen::VectorXd> normals;
  std::vector<double> rhs;
  auto push = [&](const Eigen::VectorXd& a, double b) {
    if (std::isfinite(b)) {
      normals.push_back(a);
      rhs.push_back(b);
    }
  };
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
    e[j] = 1.0;
    push(e, lp.col_ub[j]);
    push(-e, -lp.col_lb[j]);
  }
  for (int r = 0; r < lp.num_rows(); ++r) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(k);
    for (int s = lp.row_start[r]; s < lp.row_start[r + 1]; ++s) {
      a[lp.col_index[s]] += lp.coeff[s];
    }
    push(a, lp.row_ub[r]);
    push(-a, -lp.row_lb[r]);
  }
  const int m = static_cast<int>(normals.size());
  double best = -kInfinity;
  std::vector<int> pick(k);
  std::function<void(int, int)> recurse = [&](int start, int depth) {
    if (depth == k) {
      Eigen::MatrixXd a(k, k);
      Eigen::VectorXd b(k);
      for (int t = 0; t < k; ++t) {
        a.row(t) = normals[pick[t]].transpose();
        b[t] = rhs[pick[t]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd x = lu.solve(b);
      for (int r = 0; r < m; ++r) {
        if (normals[r].dot(x) > rhs[r] + 1e-8) return;
      }
      best = std::max(best, lp.objective.dot(x));
      return;
    }
    for (int i = start; i <= m - (k - depth); ++i) {
      pick[depth] = i;
      recurse(i + 1, depth + 1);
    }
  };
  recurse(0, 0);
  return best;
}

}  // namespace

TEST_CASE("coordinate LP structure") {
  // n = 1, d = 1: two variables, no edge rows
  const auto single = point_mass(Eigen::VectorXd::Zero(1));
  const auto target1 = standard_normal(1);
  const auto spec1 = langevin_spec(1);
  const OperatorData op1 = drift_general(spec1, target1, single.points());
  SpannerGraph empty;
  empty.n = 1;
  const CoordinateLp lp1 = build_coordinate_lp(0, single, op1, empty, {});
  CHECK(lp1.lp.num_cols == 2);
  CHECK(lp1.lp.num_rows() == 0);

  // n = 2, d = 1, one edge: 2 + 2d + 4 = 8 edge inequality rows
  Eigen::MatrixXd two(2, 1);
  two << -1.0, 1.0;
  const auto pair = WeightedSample::uniform(two);
  const auto graph = build_sorted_1d_spanner(pair);
  const OperatorData op2 = drift_general(spec1, target1, pair.points());
  const CoordinateLp lp2 = build_coordinate_lp(0, pair, op2, graph, {});
  CHECK(lp2.lp.num_cols == 4);
  CHECK(lp2.lp.num_rows() == 8);

  // scales double every bound
  const CoordinateLp scaled = build_coordinate_lp(0, pair, op2, graph, {2.0, 2.0, 2.0});
  for (int j = 0; j < scaled.lp.num_cols; ++j) {
    CHECK(scaled.lp.col_ub[j] == 2.0 * lp2.lp.col_ub[j]);
  }
  for (int r = 0; r < scaled.lp.num_rows(); ++r) {
    CHECK(scaled.lp.row_ub[r] == 2.0 * lp2.lp.row_ub[r]);
  }

  CHECK_THROWS_AS(build_coordinate_lp(0, pair, op2, graph, {0.0, 1.0, 1.0}), config_error);
  CHECK_THROWS_AS(build_coordinate_lp(1, pair, op2, graph, {}), config_error);
}

TEST_CASE("point mass at the mode: S = 1") {
  const auto witness = spanner_stein_discrepancy(point_mass(Eigen::VectorXd::Zero(1)),
                                                 standard_normal(1), langevin_spec(1));
  CHECK(witness.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(witness.h_star.size() == 1);
}

TEST_CASE("point mass off the mode: S = 2") {
  const auto witness = spanner_stein_discrepancy(point_mass(Eigen::VectorXd::Ones(1)),
                                                 standard_normal(1), langevin_spec(1));
  CHECK(witness.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("2-D point mass decouples into per-coordinate values") {
  const auto witness = spanner_stein_discrepancy(point_mass(Eigen::VectorXd::Zero(2)),
                                                 standard_normal(2), langevin_spec(2));
  CHECK(witness.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(witness.coord_values[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(witness.coord_values[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("two-point LP agrees with the vertex-enumeration oracle") {
  Eigen::MatrixXd pts(2, 1);
  pts << -1.0, 1.0;
  const auto sample = WeightedSample::uniform(pts);
  const auto target = standard_normal(1);
  const auto spec = langevin_spec(1);
  const auto graph = build_sorted_1d_spanner(sample);
  const OperatorData op = drift_general(spec, target, sample.points());
  const CoordinateLp lp = build_coordinate_lp(0, sample, op, graph, {});
  const double oracle = brute_force_optimum(lp.lp);
  const CoordinateSolution sol = solve_lp(lp);
  CHECK(sol.tau == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(sol.tau == doctest::Approx(1.0).epsilon(1e-9));  // by hand: tau = 1

  const auto witness = spanner_stein_discrepancy(sample, target, spec);
  CHECK(witness.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("random small sample LP matches the oracle per coordinate") {
  Rng rng(51);
  Eigen::MatrixXd pts(3, 1);
  pts << -0.8, 0.3, 1.9;
  const auto sample = WeightedSample::uniform(pts);
  const auto target = make_gmm_target(symmetric_mixture_1d(3.0));
  const auto spec = langevin_spec(1);
  const auto graph = build_sorted_1d_spanner(sample);
  const OperatorData op = drift_general(spec, target, sample.points());
  const CoordinateLp lp = build_coordinate_lp(0, sample, op, graph, {});
  CHECK(solve_lp(lp).tau == doctest::Approx(brute_force_optimum(lp.lp)).epsilon(1e-8));
}

TEST_CASE("homogeneity: scaling all bounds scales the value") {
  Rng rng(53);
  Eigen::MatrixXd pts(10, 2);
  for (int i = 0; i < 10; ++i) {
    pts(i, 0) = rng.normal();
    pts(i, 1) = rng.normal();
  }
  const auto sample = WeightedSample::uniform(pts);
  const auto target = standard_normal(2);
  const auto spec = langevin_spec(2);
  SteinOptions opts;
  const double base = spanner_stein_discrepancy(sample, target, spec, opts).value;
  opts.scales = {2.0, 2.0, 2.0};
  const double doubled = spanner_stein_discrepancy(sample, target, spec, opts).value;
  CHECK(doubled == doctest::Approx(2.0 * base).epsilon(1e-8));

  const auto report = nonuniform_equivalence_check(sample, target, spec, {1.0, 1.0, 1.0});
  CHECK(report.pass);
  CHECK(report.s_scaled == doctest::Approx(report.s_uniform).epsilon(1e-12));
}

TEST_CASE("non-uniform bracket holds for mixed scales") {
  Rng rng(57);
  Eigen::MatrixXd pts(20, 2);
  for (int i = 0; i < 20; ++i) {
    pts(i, 0) = rng.normal();
    pts(i, 1) = rng.normal();
  }
  const auto sample = WeightedSample::uniform(pts);
  const auto report = nonuniform_equivalence_check(sample, standard_normal(2), langevin_spec(2),
                                                   {0.5, 1.0, 3.0});
  CHECK(report.pass);
  CHECK(report.s_scaled >= report.lower);
  CHECK(report.s_scaled <= report.upper);
}

TEST_CASE("witness satisfies every constraint and reproduces the objective") {
  const auto target = make_gmm_target(symmetric_mixture_1d(4.0));
  const auto spec = langevin_spec(1);
  const auto sample = gmm_sample(symmetric_mixture_1d(4.0), 30, 3);
  const auto graph = build_sorted_1d_spanner(sample);
  const OperatorData op = drift_general(spec, target, sample.points());
  SteinOptions opts;
  opts.graph = &graph;
  const auto witness = spanner_stein_discrepancy(sample, target, spec, opts);
  const auto check = check_witness(witness, sample, op, graph, {});
  CHECK(check.max_constraint_residual <= 1e-8);
  CHECK(check.max_objective_deviation <= 1e-8);
  CHECK(check.weighted_h_deviation <= 1e-8);
  CHECK(witness.value == doctest::Approx(witness.coord_values.sum()).epsilon(1e-12));
}

TEST_CASE("adding edges can only decrease the discrepancy") {
  Rng rng(61);
  Eigen::MatrixXd pts(25, 2);
  for (int i = 0; i < 25; ++i) {
    pts(i, 0) = rng.normal();
    pts(i, 1) = rng.normal();
  }
  const auto sample = WeightedSample::uniform(pts);
  const auto target = standard_normal(2);
  const auto spec = langevin_spec(2);
  SteinOptions opts;
  const double sparse_value = spanner_stein_discrepancy(sample, target, spec, opts).value;
  const auto full = complete_graph(sample);
  opts.graph = &full;
  const double dense_value = spanner_stein_discrepancy(sample, target, spec, opts).value;
  CHECK(dense_value <= sparse_value + 1e-9);
  CHECK(dense_value >= 0.0);
}

TEST_CASE("objective weights enter linearly") {
  Eigen::MatrixXd pts(4, 1);
  pts << -1.5, -0.2, 0.4, 2.0;
  const auto sample = WeightedSample::uniform(pts);
  const auto target = standard_normal(1);
  const auto spec = langevin_spec(1);
  const auto graph = build_sorted_1d_spanner(sample);
  const OperatorData op = drift_general(spec, target, sample.points());
  CoordinateLp lp = build_coordinate_lp(0, sample, op, graph, {});
  const double base = solve_lp(lp).tau;
  lp.lp.objective *= 3.0;  // unnormalized-weights hook
  CHECK(solve_lp(lp).tau == doctest::Approx(3.0 * base).epsilon(1e-9));
}

TEST_CASE("iteration limit surfaces as solver_error") {
  const auto sample = gmm_sample(symmetric_mixture_1d(4.0), 40, 5);
  SteinOptions opts;
  opts.simplex.max_iterations = 2;
  CHECK_THROWS_AS(spanner_stein_discrepancy(sample, make_gmm_target(symmetric_mixture_1d(4.0)),
                                            langevin_spec(1), opts),
                  solver_error);
}

TEST_CASE("witness JSON export contains the schema fields") {
  const auto witness = spanner_stein_discrepancy(point_mass(Eigen::VectorXd::Zero(1)),
                                                 standard_normal(1), langevin_spec(1));
  const std::string json = witness_to_json(witness);
  CHECK(json.find("\"value\"") != std::string::npos);
  CHECK(json.find("\"coord_values\"") != std::string::npos);
  CHECK(json.find("\"psi\"") != std::string::npos);
  CHECK(json.find("\"Psi\"") != std::string::npos);
  CHECK(json.find("\"h_star\"") != std::string::npos);
}

TEST_CASE("threads do not change the result") {
  const auto sample = gmm_sample(symmetric_mixture_1d(4.0), 15, 7);
  Eigen::MatrixXd pts(15, 2);
  Rng rng(71);
  for (int i = 0; i < 15; ++i) {
    pts(i, 0) = rng.normal();
    pts(i, 1) = rng.normal();
  }
  const auto sample2 = WeightedSample::uniform(pts);
  const auto target = standard_normal(2);
  const auto spec = langevin_spec(2);
  SteinOptions opts;
  opts.threads = 1;
  const auto w1 = spanner_stein_discrepancy(sample2, target, spec, opts);
  opts.threads = 4;
  const auto w4 = spanner_stein_discrepancy(sample2, target, spec, opts);
  CHECK(w1.value == w4.value);
  CHECK((w1.psi - w4.psi).cwiseAbs().maxCoeff() == 0.0);
}

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

#include "steinbench/targets.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "doctest.h"
#include "steinbench/errors.hpp"

using namespace steinbench;

namespace {

// Finite-difference oracle for a score at random probes.
double max_fd_deviation(const TargetModel& target, int probes, std::uint64_t seed,
                        double spread = 2.0) {
  REQUIRE(target.log_density.has_value());
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < probes; ++t) {
    const Eigen::VectorXd x = spread * rng.normal_vector(target.dim);
    const Eigen::VectorXd s = target.score(x);
    const Eigen::VectorXd fd = fd_gradient(*target.log_density, x);
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    worst = std::max(worst, (fd - s).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

LogisticRegressionParams small_logistic(std::uint64_t seed, int L, int d) {
  Rng rng(seed);
  LogisticRegressionParams p;
  p.covariates.resize(L, d);
  p.labels.resize(L);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < d; ++k) p.covariates(l, k) = rng.normal();
    p.labels[l] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  }
  p.prior_mean = Eigen::VectorXd::Zero(d);
  p.prior_cov = Eigen::MatrixXd::Identity(d, d);
  return p;
}

}  // namespace

TEST_CASE("gmm score symmetry and Gaussian special case") {
  const auto params = symmetric_mixture_1d(4.0);
  CHECK(gmm_score(params, Eigen::VectorXd::Zero(1))[0] == doctest::Approx(0.0).epsilon(1e-14));

  GaussianMixtureParams single;
  single.weights = Eigen::VectorXd::Ones(1);
  single.means = {Eigen::Vector2d(1.0, -2.0)};
  single.cov = (Eigen::Matrix2d() << 2.0, 0.5, 0.5, 1.0).finished();
  const Eigen::Vector2d x(0.3, 0.7);
  const Eigen::VectorXd expected = single.cov.ldlt().solve(single.means[0] - x);
  CHECK((gmm_score(single, x) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gmm score matches finite differences") {
  const auto target = make_gmm_target(symmetric_mixture_1d(4.0));
  CHECK(max_fd_deviation(target, 20, 3) < 1e-5);
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd fd = fd_gradient(*target.log_density, x);
  CHECK(std::abs(fd[0] - target.score(x)[0]) < 1e-5);
}

TEST_CASE("gmm log-sum-exp stable at large separation") {
  const auto target = make_gmm_target(symmetric_mixture_1d(30.0));
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, -15.0);
  CHECK(std::isfinite(target.score(x)[0]));
  CHECK(std::isfinite((*target.log_density)(x)));
  CHECK(max_fd_deviation(target, 10, 5) < 1e-5);
}

TEST_CASE("gmm score is translation equivariant") {
  Rng rng(17);
  GaussianMixtureParams p;
  p.weights = Eigen::Vector2d(0.3, 0.7);
  p.means = {Eigen::Vector2d(-1.0, 0.5), Eigen::Vector2d(2.0, 1.0)};
  p.cov = Eigen::Matrix2d::Identity();
  for (int t = 0; t < 5; ++t) {
    const Eigen::Vector2d shift(rng.normal(), rng.normal());
    const Eigen::Vector2d x(rng.normal(), rng.normal());
    GaussianMixtureParams shifted = p;
    for (auto& mu : shifted.means) mu += shift;
    const Eigen::VectorXd lhs = gmm_score(p, x);
    const Eigen::VectorXd rhs = gmm_score(shifted, Eigen::VectorXd(x + shift));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("gmm sampler determinism and component selection") {
  const auto params = symmetric_mixture_1d(4.0);
  const auto s1 = gmm_sample(params, 50, 42);
  const auto s2 = gmm_sample(params, 50, 42);
  CHECK((s1.points() - s2.points()).cwiseAbs().maxCoeff() == 0.0);

  GaussianMixtureParams degenerate = params;
  degenerate.weights = Eigen::Vector2d(1.0, 0.0);
  const auto s3 = gmm_sample(degenerate, 200, 1);
  CHECK(s3.points().maxCoeff() < 2.0);  // all draws near the component at -2
}

TEST_CASE("gmm sampler empirical mean matches the mixture mean") {
  GaussianMixtureParams p;
  p.weights = Eigen::Vector2d(0.25, 0.75);
  p.means = {Eigen::VectorXd::Constant(1, -2.0), Eigen::VectorXd::Constant(1, 2.0)};
  p.cov = Eigen::MatrixXd::Identity(1, 1);
  const double true_mean = 0.25 * -2.0 + 0.75 * 2.0;
  const int n = 100000;
  const auto s = gmm_sample(p, n, 9);
  double mean = 0.0, var = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) mean += s.weights()[i] * s.points()(i, 0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    var += s.weights()[i] * (s.points()(i, 0) - mean) * (s.points()(i, 0) - mean);
  }
  const double stderr_mean = std::sqrt(var / n);
  CHECK(std::abs(mean - true_mean) <= 4.0 * stderr_mean);
}

TEST_CASE("logistic score prior-only and single-datum cases") {
  LogisticRegressionParams p;
  p.covariates = Eigen::MatrixXd(0, 2);
  p.labels = Eigen::VectorXd(0);
  p.prior_mean = Eigen::VectorXd::Zero(2);
  p.prior_cov = 4.0 * Eigen::MatrixXd::Identity(2, 2);
  const Eigen::Vector2d beta(1.0, -2.0);
  CHECK((logistic_score(p, beta) + p.prior_cov.inverse() * beta).cwiseAbs().maxCoeff() < 1e-12);

  LogisticRegressionParams one = small_logistic(2, 1, 2);
  const Eigen::VectorXd at_zero = logistic_score(one, Eigen::VectorXd::Zero(2));
  const Eigen::VectorXd expected = 0.5 * one.labels[0] * one.covariates.row(0).transpose();
  CHECK((at_zero - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("logistic score matches finite differences and stays finite") {
  const auto target = make_logistic_target(small_logistic(5, 12, 3));
  CHECK(max_fd_deviation(target, 20, 7) < 1e-5);
  const Eigen::VectorXd huge = Eigen::VectorXd::Constant(3, 1e8);
  CHECK(target.score(huge).allFinite());
  CHECK(target.score(-huge).allFinite());
}

TEST_CASE("huber score clamps and matches finite differences") {
  HuberRegressionParams p;
  p.covariates = Eigen::MatrixXd(1, 2);
  p.covariates << 1.0, 2.0;
  p.responses = Eigen::VectorXd::Constant(1, 10.0);
  p.prior_mean = Eigen::VectorXd::Zero(2);
  p.prior_cov = Eigen::MatrixXd::Identity(2, 2);
  p.threshold = 1.0;
  // residual 10 at beta = 0: clamped contribution v * 1 plus zero prior score
  const Eigen::VectorXd s = huber_score(p, Eigen::VectorXd::Zero(2));
  CHECK((s - p.covariates.row(0).transpose()).cwiseAbs().maxCoeff() < 1e-12);

  // zero residuals leave only the prior
  HuberRegressionParams zero = p;
  zero.responses[0] = 0.0;
  const Eigen::Vector2d beta(0.5, -0.25);
  const Eigen::VectorXd prior_only = -beta;
  HuberRegressionParams no_data = p;
  no_data.covariates = Eigen::MatrixXd(0, 2);
  no_data.responses = Eigen::VectorXd(0);
  CHECK((huber_score(no_data, beta) - prior_only).cwiseAbs().maxCoeff() < 1e-12);

  Rng rng(23);
  HuberRegressionParams random;
  random.covariates.resize(8, 2);
  random.responses.resize(8);
  for (int l = 0; l < 8; ++l) {
    random.covariates(l, 0) = rng.normal();
    random.covariates(l, 1) = rng.normal();
    random.responses[l] = rng.normal();
  }
  random.prior_mean = Eigen::VectorXd::Zero(2);
  random.prior_cov = Eigen::MatrixXd::Identity(2, 2);
  random.threshold = 0.8;
  CHECK(max_fd_deviation(make_huber_target(random), 20, 29) < 1e-5);
}

TEST_CASE("huber score is continuous at the clamp threshold") {
  HuberRegressionParams p;
  p.covariates = Eigen::MatrixXd(1, 1);
  p.covariates << 1.0;
  p.responses = Eigen::VectorXd::Constant(1, 1.0);
  p.prior_mean = Eigen::VectorXd::Zero(1);
  p.prior_cov = Eigen::MatrixXd::Identity(1, 1);
  p.threshold = 1.0;
  // residual crosses +-c as beta moves through 0 and 2
  for (const double at : {0.0, 2.0}) {
    const Eigen::VectorXd lo = huber_score(p, Eigen::VectorXd::Constant(1, at - 1e-9));
    const Eigen::VectorXd hi = huber_score(p, Eigen::VectorXd::Constant(1, at + 1e-9));
    CHECK(std::abs(lo[0] - hi[0]) < 1e-7);
  }
}

TEST_CASE("studentt score: symmetry, boundedness, finite differences") {
  StudentTRegressionParams p;
  p.design = Eigen::MatrixXd(3, 2);
  p.design << 1.0, 0.5, -0.3, 0.2, 0.7, -1.1;
  p.response = Eigen::VectorXd::Zero(3);
  p.dof = 10.0;
  p.noise_cov = Eigen::MatrixXd::Identity(3, 3);
  p.scale = 0.5;
  CHECK(studentt_score(p, Eigen::VectorXd::Zero(2)).cwiseAbs().maxCoeff() < 1e-14);

  Rng rng(31);
  p.response = rng.normal_vector(3);
  const auto target = make_studentt_target(p);
  CHECK(max_fd_deviation(target, 20, 37) < 1e-5);

  const Eigen::VectorXd far = Eigen::VectorXd::Constant(2, 1e6);
  const double norm_far = target.score(far).cwiseAbs().sum();
  CHECK(std::isfinite(norm_far));
  CHECK(norm_far < 2.0 / p.scale * p.scale + 10.0);  // prior caps at delta, likelihood decays
}

TEST_CASE("riemannian pseudo-Huber spec") {
  const DiffusionSpec spec = riemannian_pseudo_huber_spec(1.0, 2);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  CHECK((spec.a(zero) - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((*spec.div_m)(zero).cwiseAbs().maxCoeff() < 1e-14);

  const Eigen::Vector2d beta10(1.0, 0.0);
  const Eigen::VectorXd div10 = (*spec.div_m)(beta10);
  CHECK(div10[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(div10[1] == doctest::Approx(0.0).epsilon(1e-12));

  // derived via the finite-difference oracle on m's rows
  const Eigen::Vector2d beta34(3.0, 4.0);
  const DiffusionSpec fd_spec = with_fd_div_m(spec);
  const Eigen::VectorXd fd = (*fd_spec.div_m)(beta34);
  const Eigen::VectorXd analytic = (*spec.div_m)(beta34);
  CHECK((fd - analytic).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(analytic[0] == doctest::Approx(3.0 / std::sqrt(26.0)).epsilon(1e-12));
  CHECK(analytic[1] == doctest::Approx(4.0 / std::sqrt(26.0)).epsilon(1e-12));

  CHECK_THROWS_AS(riemannian_pseudo_huber_spec(0.0, 2), config_error);
}

TEST_CASE("validate_target distinguishes matched and mismatched pairs") {
  TargetModel normal;
  normal.dim = 1;
  normal.score = [](const Eigen::VectorXd& x) { return (-x).eval(); };
  normal.log_density = [](const Eigen::VectorXd& x) { return -0.5 * x.squaredNorm(); };
  std::vector<Eigen::VectorXd> probes = {Eigen::VectorXd::Zero(1),
                                         Eigen::VectorXd::Constant(1, 1.0),
                                         Eigen::VectorXd::Constant(1, -2.0)};
  CHECK(validate_target(normal, probes).pass);

  TargetModel wrong = normal;
  wrong.log_density = [](const Eigen::VectorXd& x) {
    return -std::pow(x[0], 4);
  };
  CHECK_FALSE(validate_target(wrong, probes).pass);

  Rng rng(41);
  std::vector<Eigen::VectorXd> random_probes;
  for (int t = 0; t < 10; ++t) random_probes.push_back(rng.normal_vector(1));
  CHECK(validate_target(make_gmm_target(symmetric_mixture_1d(4.0)), random_probes).pass);

  std::vector<Eigen::VectorXd> bad_dim = {Eigen::VectorXd::Zero(2)};
  CHECK_THROWS_AS(validate_target(normal, bad_dim), config_error);
}

TEST_CASE("second_order_target doubles the space") {
  const auto base = make_gmm_target(symmetric_mixture_1d(4.0));
  const auto joint = second_order_target(base);
  REQUIRE(joint.dim == 2);
  const Eigen::Vector2d z(0.5, -1.5);
  const Eigen::VectorXd s = joint.score(z);
  CHECK(s[0] == doctest::Approx(base.score(z.head(1))[0]));
  CHECK(s[1] == doctest::Approx(1.5));
  REQUIRE(joint.sampler.has_value());
  Rng rng(5);
  CHECK((*joint.sampler)(rng).size() == 2);
}

TEST_CASE("parameter validation") {
  GaussianMixtureParams bad;
  bad.weights = Eigen::Vector2d(0.5, 0.6);
  bad.means = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
  bad.cov = Eigen::MatrixXd::Identity(1, 1);
  CHECK_THROWS_AS(make_gmm_target(bad), config_error);

  LogisticRegressionParams lbad = small_logistic(1, 3, 2);
  lbad.labels[0] = 2.0;
  CHECK_THROWS_AS(make_logistic_target(lbad), config_error);

  StudentTRegressionParams sbad;
  sbad.design = Eigen::MatrixXd::Identity(2, 2);
  sbad.response = Eigen::VectorXd::Zero(2);
  sbad.noise_cov = Eigen::MatrixXd::Identity(2, 2);
  sbad.dof = -1.0;
  CHECK_THROWS_AS(make_studentt_target(sbad), config_error);
}

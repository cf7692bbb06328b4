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

#include "steinbench/samplers.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "steinbench/errors.hpp"
#include "steinbench/targets.hpp"

using namespace steinbench;

namespace {

TargetModel standard_normal_1d() {
  GaussianMixtureParams p;
  p.weights = Eigen::VectorXd::Ones(1);
  p.means = {Eigen::VectorXd::Zero(1)};
  p.cov = Eigen::MatrixXd::Identity(1, 1);
  return make_gmm_target(p);
}

TargetModel flat_target(int d) {
  TargetModel t;
  t.dim = d;
  t.score = [d](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(d).eval(); };
  t.log_density = [](const Eigen::VectorXd&) { return 0.0; };
  return t;
}

// Batch-means standard error for a correlated chain.
std::pair<double, double> batch_mean_se(const Eigen::VectorXd& x, int batches) {
  const auto n = x.size();
  const auto width = n / batches;
  Eigen::VectorXd means(batches);
  for (int b = 0; b < batches; ++b) means[b] = x.segment(b * width, width).mean();
  const double grand = means.mean();
  const double var = (means.array() - grand).square().sum() / (batches - 1);
  return {grand, std::sqrt(var / batches)};
}

}  // namespace

TEST_CASE("mala with zero noise and zero score stays put") {
  ChainConfig cfg;
  cfg.epsilon = 0.3;
  cfg.n_steps = 50;
  cfg.thin = 1;
  cfg.burn_in = 0.0;
  cfg.init = Eigen::VectorXd::Constant(2, 1.5);
  cfg.zero_noise = true;
  const auto result = mala_chain(flat_target(2), cfg);
  REQUIRE(result.sample.size() == 1);  // all states identical, collapsed
  CHECK(result.sample.points()(0, 0) == 1.5);
  CHECK(result.sample.weights()[0] == 1.0);
  CHECK(result.stats.accept_rate == 1.0);
}

TEST_CASE("proposal equal to the current state is always accepted") {
  const auto target = standard_normal_1d();
  const Eigen::VectorXd at = Eigen::VectorXd::Constant(1, 0.7);
  CHECK(mala_log_accept(target, at, at, 0.25) == 0.0);
}

TEST_CASE("mala is deterministic per seed") {
  const auto target = standard_normal_1d();
  ChainConfig cfg;
  cfg.epsilon = 0.5;
  cfg.n_steps = 500;
  cfg.thin = 2;
  cfg.seed = 77;
  cfg.init = Eigen::VectorXd::Zero(1);
  const auto a = mala_chain(target, cfg);
  const auto b = mala_chain(target, cfg);
  REQUIRE(a.sample.size() == b.sample.size());
  CHECK((a.sample.points() - b.sample.points()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.stats.accept_rate == b.stats.accept_rate);
}

TEST_CASE("mala acceptance rate is high for a small step") {
  const auto target = standard_normal_1d();
  ChainConfig cfg;
  cfg.epsilon = 0.05;
  cfg.n_steps = 10000;
  cfg.thin = 1;
  cfg.seed = 3;
  cfg.init = Eigen::VectorXd::Zero(1);
  const auto result = mala_chain(target, cfg);
  CHECK(result.stats.accept_rate > 0.9);
}

TEST_CASE("mala recovers the standard normal moments") {
  const auto target = standard_normal_1d();
  ChainConfig cfg;
  cfg.epsilon = 0.5;
  cfg.n_steps = 30000;
  cfg.thin = 1;
  cfg.burn_in = 0.1;
  cfg.seed = 13;
  cfg.init = Eigen::VectorXd::Zero(1);

  // collect the raw thinned states before collapse for moment estimates
  Rng rng(cfg.seed);
  Eigen::VectorXd states(cfg.n_steps);
  Eigen::VectorXd beta = cfg.init;
  for (long s = 0; s < cfg.n_steps; ++s) {
    const Eigen::VectorXd noise = rng.normal_vector(1);
    const Eigen::VectorXd prop =
        beta + 0.5 * cfg.epsilon * target.score(beta) + std::sqrt(cfg.epsilon) * noise;
    if (std::log(rng.uniform()) <= mala_log_accept(target, beta, prop, cfg.epsilon)) beta = prop;
    states[s] = beta[0];
  }
  const auto tail = states.tail(27000);
  const auto [mean, se] = batch_mean_se(tail, 50);
  CHECK(std::abs(mean) <= 4.0 * se);
  const double var = (tail.array() - mean).square().mean();
  CHECK(std::abs(var - 1.0) < 0.1);
}

TEST_CASE("mala requires a log density and a positive step") {
  TargetModel no_density;
  no_density.dim = 1;
  no_density.score = [](const Eigen::VectorXd& x) { return (-x).eval(); };
  ChainConfig cfg;
  cfg.epsilon = 0.1;
  cfg.n_steps = 10;
  cfg.init = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS(mala_chain(no_density, cfg), config_error);

  ChainConfig bad = cfg;
  bad.epsilon = -1.0;
  CHECK_THROWS_AS(mala_chain(standard_normal_1d(), bad), config_error);
}

TEST_CASE("sgrld with identity metric reduces to the unadjusted update") {
  const auto target = standard_normal_1d();
  RiemannianMetric identity;
  identity.ginv = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Identity(x.size(), x.size()).eval();
  };
  identity.correction = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Zero(x.size()).eval();
  };
  ChainConfig cfg;
  cfg.epsilon = 0.2;
  cfg.n_steps = 3;
  cfg.thin = 1;
  cfg.burn_in = 0.0;
  cfg.seed = 5;
  cfg.init = Eigen::VectorXd::Constant(1, 0.4);
  const auto chain = sgrld_chain(target, identity, cfg);

  // replay the recursion by hand
  Rng rng(cfg.seed);
  Eigen::VectorXd beta = cfg.init;
  std::vector<double> expected;
  for (int s = 0; s < 3; ++s) {
    beta += 0.5 * cfg.epsilon * target.score(beta);
    beta += std::sqrt(cfg.epsilon) * rng.normal_vector(1);
    expected.push_back(beta[0]);
  }
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 3; ++i) CHECK(chain.sample.points()(i, 0) == expected[i]);
}

TEST_CASE("sgrld zero-noise zero-score chain is constant") {
  RiemannianMetric identity;
  identity.ginv = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Identity(x.size(), x.size()).eval();
  };
  identity.correction = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Zero(x.size()).eval();
  };
  ChainConfig cfg;
  cfg.epsilon = 0.2;
  cfg.n_steps = 20;
  cfg.burn_in = 0.0;
  cfg.zero_noise = true;
  cfg.init = Eigen::VectorXd::Constant(3, -2.0);
  const auto chain = sgrld_chain(flat_target(3), identity, cfg);
  CHECK(chain.sample.size() == 1);
  CHECK(chain.sample.points()(0, 1) == -2.0);
}

TEST_CASE("pseudo-Huber metric inverse at the origin") {
  const auto metric = pseudo_huber_metric(0.1);
  const Eigen::MatrixXd g0 = metric.ginv(Eigen::VectorXd::Zero(4));
  CHECK((g0 - 2.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(metric.correction(Eigen::VectorXd::Zero(4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("minibatch gradients are exhaustively unbiased (L = 5, batch = 2)") {
  Rng rng(517);
  LogisticRegressionParams p;
  const int L = 5, d = 3;
  p.covariates.resize(L, d);
  p.labels.resize(L);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < d; ++k) p.covariates(l, k) = rng.normal();
    p.labels[l] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  }
  p.prior_mean = Eigen::VectorXd::Zero(d);
  p.prior_cov = Eigen::MatrixXd::Identity(d, d);
  const auto target = make_logistic_target(p);
  const Eigen::VectorXd beta = rng.normal_vector(d);

  Eigen::VectorXd average = Eigen::VectorXd::Zero(d);
  int count = 0;
  for (int a = 0; a < L; ++a) {
    for (int b = a + 1; b < L; ++b) {
      average += minibatch_score(target, beta, {a, b});
      ++count;
    }
  }
  average /= count;
  CHECK(count == 10);
  CHECK((average - target.score(beta)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("non-SPD metric aborts with the state reported") {
  RiemannianMetric broken;
  broken.ginv = [](const Eigen::VectorXd& x) {
    return (-Eigen::MatrixXd::Identity(x.size(), x.size())).eval();
  };
  broken.correction = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Zero(x.size()).eval();
  };
  ChainConfig cfg;
  cfg.epsilon = 0.1;
  cfg.n_steps = 5;
  cfg.burn_in = 0.0;
  cfg.init = Eigen::VectorXd::Constant(1, 0.25);
  try {
    sgrld_chain(standard_normal_1d(), broken, cfg);
    FAIL("expected solver_error");
  } catch (const solver_error& e) {
    CHECK(std::string(e.what()).find("0.25") != std::string::npos);
  }
}

TEST_CASE("sgrld is deterministic per seed") {
  const auto target = standard_normal_1d();
  const auto metric = pseudo_huber_metric(1.0);
  ChainConfig cfg;
  cfg.epsilon = 0.05;
  cfg.n_steps = 300;
  cfg.thin = 3;
  cfg.seed = 99;
  cfg.init = Eigen::VectorXd::Zero(1);
  const auto a = sgrld_chain(target, metric, cfg);
  const auto b = sgrld_chain(target, metric, cfg);
  CHECK((a.sample.points() - b.sample.points()).cwiseAbs().maxCoeff() == 0.0);
}

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

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "steinbench/sample.hpp"
#include "steinbench/target.hpp"

namespace steinbench {

/// Common chain configuration. Thinning keeps every `thin`-th state after
/// the burn-in fraction; `minibatch` applies to SGRLD only (0 = full
/// gradients). `zero_noise` is a test hook that suppresses the Gaussian
/// innovations.
struct ChainConfig {
  double epsilon = 0.0;
  long n_steps = 0;
  long thin = 1;
  double burn_in = 0.1;
  int minibatch = 0;
  std::uint64_t seed = 0;
  Eigen::VectorXd init;
  bool zero_noise = false;
};

struct ChainStats {
  double accept_rate = 1.0;
  long kept = 0;
};

struct ChainResult {
  WeightedSample sample;
  ChainStats stats;
};

/// Metropolis-adjusted Langevin: proposal beta + (eps/2) score + sqrt(eps) xi
/// with the standard MH correction. Requires the target's log density.
ChainResult mala_chain(const TargetModel& target, const ChainConfig& cfg);

/// Log MH acceptance ratio of a MALA move from `from` to `to`.
double mala_log_accept(const TargetModel& target, const Eigen::VectorXd& from,
                       const Eigen::VectorXd& to, double epsilon);

/// Riemannian metric with analytic inverse and correction term
/// Gamma_i = sum_j d/dx_j [G^{-1}]_{ij}.
struct RiemannianMetric {
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> ginv;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> correction;
};

/// The scalar metric G = 1 / (2 sqrt(1 + |x/delta|^2)) I used with the
/// pseudo-Huber prior; G^{-1}(0) = 2 I.
RiemannianMetric pseudo_huber_metric(double delta);

/// Unadjusted stochastic-gradient Riemannian Langevin dynamics:
///   beta' = beta + (eps/2)(G^{-1} grad-hat + Gamma) + N(0, eps G^{-1}).
/// Minibatch gradients rescale the likelihood part by L/batch and are
/// unbiased; requires target.parts when minibatch > 0. Aborts with the
/// offending state if G^{-1} is not SPD somewhere along the chain.
ChainResult sgrld_chain(const TargetModel& target, const RiemannianMetric& metric,
                        const ChainConfig& cfg);

/// Stochastic-gradient estimate over an explicit minibatch index set
/// (likelihood rescaled by count/|batch|). Exposed for the exhaustive
/// unbiasedness check.
Eigen::VectorXd minibatch_score(const TargetModel& target, const Eigen::VectorXd& beta,
                                const std::vector<int>& batch);

}  // namespace steinbench

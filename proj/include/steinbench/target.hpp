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
#include <functional>
#include <optional>
#include <vector>

#include "steinbench/rng.hpp"

namespace steinbench {

/// Likelihood split into a prior term and L per-datum terms, so that
/// score(x) = prior_score(x) + sum_l datum_score(l, x). Consumed by the
/// stochastic-gradient sampler for unbiased minibatch gradients.
struct LikelihoodParts {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> prior_score;
  std::function<Eigen::VectorXd(int, const Eigen::VectorXd&)> datum_score;
  int count = 0;
};

/// Evaluator of a target density known up to its normalizing constant.
/// `score` is the gradient of the log density and is always present;
/// `log_density` (up to an additive constant) is needed by MALA and by
/// finite-difference validation; `sampler` is an exact draw where one
/// exists (mixture targets only).
struct TargetModel {
  int dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> score;
  std::optional<std::function<double(const Eigen::VectorXd&)>> log_density;
  std::optional<std::function<Eigen::VectorXd(Rng&)>> sampler;
  std::optional<LikelihoodParts> parts;
};

struct TargetValidation {
  double max_rel_deviation = 0.0;
  bool pass = false;
};

/// Compares the score against central finite differences of log_density
/// at the probe points; passes iff the max relative deviation is <= 1e-4.
/// Probes of the wrong dimension are rejected.
TargetValidation validate_target(const TargetModel& target,
                                 const std::vector<Eigen::VectorXd>& probes);

/// Central finite-difference gradient of f at x, step scaled per axis.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h_scale = 1e-5);

}  // namespace steinbench

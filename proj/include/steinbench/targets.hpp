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
#include <vector>

#include "steinbench/diffusion.hpp"
#include "steinbench/sample.hpp"
#include "steinbench/target.hpp"

namespace steinbench {

/// Mixture of Gaussians with shared SPD covariance.
struct GaussianMixtureParams {
  Eigen::VectorXd weights;            // positive, sum to 1
  std::vector<Eigen::VectorXd> means;
  Eigen::MatrixXd cov;
};

/// Two equally weighted unit-variance components at +-separation/2 in 1-D.
GaussianMixtureParams symmetric_mixture_1d(double separation);

Eigen::VectorXd gmm_score(const GaussianMixtureParams& params, const Eigen::VectorXd& x);
double gmm_log_density(const GaussianMixtureParams& params, const Eigen::VectorXd& x);
WeightedSample gmm_sample(const GaussianMixtureParams& params, int n, std::uint64_t seed);
TargetModel make_gmm_target(GaussianMixtureParams params);

/// Bayesian logistic regression posterior: Gaussian prior N(mean, cov),
/// labels in {-1, +1}.
struct LogisticRegressionParams {
  Eigen::MatrixXd covariates;  // L x d
  Eigen::VectorXd labels;      // entries -1 or +1
  Eigen::VectorXd prior_mean;
  Eigen::MatrixXd prior_cov;
};

Eigen::VectorXd logistic_score(const LogisticRegressionParams& params,
                               const Eigen::VectorXd& beta);
TargetModel make_logistic_target(LogisticRegressionParams params);

/// Bayesian regression with Huber's least favorable error model.
struct HuberRegressionParams {
  Eigen::MatrixXd covariates;  // L x d
  Eigen::VectorXd responses;   // L
  Eigen::VectorXd prior_mean;
  Eigen::MatrixXd prior_cov;
  double threshold = 1.0;      // c > 0
};

Eigen::VectorXd huber_score(const HuberRegressionParams& params, const Eigen::VectorXd& beta);
TargetModel make_huber_target(HuberRegressionParams params);

/// Bayesian multivariate Student's t regression under a pseudo-Huber prior.
/// The score follows the gradient of the displayed density, whose
/// likelihood factor is (nu + L)/nu (finite-difference verified).
struct StudentTRegressionParams {
  Eigen::MatrixXd design;     // L x d
  Eigen::VectorXd response;   // L
  double dof = 10.0;          // nu > 0
  Eigen::MatrixXd noise_cov;  // L x L, SPD
  double scale = 0.1;         // pseudo-Huber delta > 0
};

Eigen::VectorXd studentt_score(const StudentTRegressionParams& params,
                               const Eigen::VectorXd& beta);
TargetModel make_studentt_target(StudentTRegressionParams params);

/// Riemannian diffusion for the pseudo-Huber prior geometry:
/// a(x) = sqrt(1 + |x|^2/delta^2) I, c = 0, with analytic row divergence
/// div_m(x) = x / (delta^2 sqrt(1 + |x|^2/delta^2)).
DiffusionSpec riemannian_pseudo_huber_spec(double delta, int dim);

/// Joint target P (x) N(0, I) on R^{2d} for the second-order diffusion.
TargetModel second_order_target(const TargetModel& base);

}  // namespace steinbench

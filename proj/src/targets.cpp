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

#include <Eigen/Cholesky>
#include <cmath>
#include <memory>

#include "steinbench/errors.hpp"

namespace steinbench {
namespace {

Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw config_error(std::string(what) + " is not symmetric positive definite");
  }
  return llt;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// log(1 + e^z), stable on both tails.
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

// 1 / (1 + e^z), stable on both tails.
double inv_one_plus_exp(double z) {
  if (z > 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

void check_gmm(const GaussianMixtureParams& p) {
  if (p.means.empty()) throw config_error("mixture needs at least one component");
  if (p.weights.size() != static_cast<Eigen::Index>(p.means.size())) {
    throw config_error("mixture weight count does not match component count");
  }
  if (p.weights.minCoeff() < 0.0) throw config_error("mixture weights must be nonnegative");
  if (std::abs(p.weights.sum() - 1.0) > 1e-9) throw config_error("mixture weights must sum to 1");
  const auto d = p.cov.rows();
  for (const auto& mu : p.means) {
    if (mu.size() != d) throw config_error("mixture mean dimension does not match covariance");
  }
}

struct GmmState {
  GaussianMixtureParams params;
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_norm;  // -0.5 log det(2 pi Sigma)

  explicit GmmState(GaussianMixtureParams p)
      : params(std::move(p)), llt(checked_llt(params.cov, "mixture covariance")) {
    const auto d = static_cast<double>(params.cov.rows());
    log_norm = -0.5 * (d * std::log(2.0 * M_PI) + log_det_from_llt(llt));
  }

  // log w_j + log phi_j(x) without the shared normalizer.
  Eigen::VectorXd component_logs(const Eigen::VectorXd& x) const {
    const auto m = static_cast<Eigen::Index>(params.means.size());
    Eigen::VectorXd logs(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const Eigen::VectorXd diff = x - params.means[j];
      logs[j] = std::log(params.weights[j]) - 0.5 * diff.dot(llt.solve(diff));
    }
    return logs;
  }
};

}  // namespace

GaussianMixtureParams symmetric_mixture_1d(double separation) {
  GaussianMixtureParams p;
  p.weights = Eigen::Vector2d(0.5, 0.5);
  p.means = {Eigen::VectorXd::Constant(1, -separation / 2.0),
             Eigen::VectorXd::Constant(1, separation / 2.0)};
  p.cov = Eigen::MatrixXd::Identity(1, 1);
  return p;
}

Eigen::VectorXd gmm_score(const GaussianMixtureParams& params, const Eigen::VectorXd& x) {
  check_gmm(params);
  GmmState state(params);
  const Eigen::VectorXd logs = state.component_logs(x);
  // Softmax of the component logs, shifted by the max for stability.
  const double shift = logs.maxCoeff();
  Eigen::VectorXd pi = (logs.array() - shift).exp();
  pi /= pi.sum();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(x.size());
  for (std::size_t j = 0; j < params.means.size(); ++j) {
    mean += pi[static_cast<Eigen::Index>(j)] * params.means[j];
  }
  return state.llt.solve(mean - x);
}

double gmm_log_density(const GaussianMixtureParams& params, const Eigen::VectorXd& x) {
  check_gmm(params);
  GmmState state(params);
  const Eigen::VectorXd logs = state.component_logs(x);
  const double shift = logs.maxCoeff();
  return shift + std::log((logs.array() - shift).exp().sum()) + state.log_norm;
}

WeightedSample gmm_sample(const GaussianMixtureParams& params, int n, std::uint64_t seed) {
  check_gmm(params);
  if (n < 1) throw config_error("gmm_sample: n must be >= 1");
  GmmState state(params);
  const Eigen::MatrixXd chol = state.llt.matrixL();
  Rng rng(seed);
  const auto d = params.cov.rows();
  Eigen::MatrixXd points(n, d);
  for (int i = 0; i < n; ++i) {
    const int j = rng.categorical(params.weights);
    points.row(i) = params.means[static_cast<std::size_t>(j)] + chol * rng.normal_vector(d);
  }
  return WeightedSample::uniform_collapsed(points);
}

TargetModel make_gmm_target(GaussianMixtureParams params) {
  check_gmm(params);
  auto state = std::make_shared<GmmState>(std::move(params));
  TargetModel t;
  t.dim = static_cast<int>(state->params.cov.rows());
  t.score = [state](const Eigen::VectorXd& x) {
    const Eigen::VectorXd logs = state->component_logs(x);
    const double shift = logs.maxCoeff();
    Eigen::VectorXd pi = (logs.array() - shift).exp();
    pi /= pi.sum();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(x.size());
    for (std::size_t j = 0; j < state->params.means.size(); ++j) {
      mean += pi[static_cast<Eigen::Index>(j)] * state->params.means[j];
    }
    return state->llt.solve(mean - x).eval();
  };
  t.log_density = [state](const Eigen::VectorXd& x) {
    const Eigen::VectorXd logs = state->component_logs(x);
    const double shift = logs.maxCoeff();
    return shift + std::log((logs.array() - shift).exp().sum()) + state->log_norm;
  };
  const Eigen::MatrixXd chol = state->llt.matrixL();
  t.sampler = [state, chol](Rng& rng) {
    const int j = rng.categorical(state->params.weights);
    return (state->params.means[static_cast<std::size_t>(j)] +
            chol * rng.normal_vector(chol.rows()))
        .eval();
  };
  return t;
}

Eigen::VectorXd logistic_score(const LogisticRegressionParams& params,
                               const Eigen::VectorXd& beta) {
  return make_logistic_target(params).score(beta);
}

TargetModel make_logistic_target(LogisticRegressionParams params) {
  const auto L = params.covariates.rows();
  const auto d = params.covariates.cols();
  if (params.labels.size() != L) throw config_error("label count does not match covariates");
  for (Eigen::Index l = 0; l < L; ++l) {
    if (params.labels[l] != 1.0 && params.labels[l] != -1.0) {
      throw config_error("labels must be -1 or +1");
    }
  }
  if (params.prior_mean.size() != d) throw config_error("prior mean dimension mismatch");
  auto p = std::make_shared<LogisticRegressionParams>(std::move(params));
  auto prior_llt = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(
      checked_llt(p->prior_cov, "prior covariance"));

  auto prior_score = [p, prior_llt](const Eigen::VectorXd& beta) {
    return (-prior_llt->solve(beta - p->prior_mean)).eval();
  };
  auto datum_score = [p](int l, const Eigen::VectorXd& beta) {
    const double y = p->labels[l];
    const double u = y * p->covariates.row(l).dot(beta);
    return (y * inv_one_plus_exp(u) * p->covariates.row(l).transpose()).eval();
  };

  TargetModel t;
  t.dim = static_cast<int>(d);
  t.score = [p, prior_score, datum_score](const Eigen::VectorXd& beta) {
    Eigen::VectorXd s = prior_score(beta);
    for (Eigen::Index l = 0; l < p->covariates.rows(); ++l) {
      s += datum_score(static_cast<int>(l), beta);
    }
    return s;
  };
  t.log_density = [p, prior_llt](const Eigen::VectorXd& beta) {
    const Eigen::VectorXd diff = beta - p->prior_mean;
    double out = -0.5 * diff.dot(prior_llt->solve(diff));
    for (Eigen::Index l = 0; l < p->covariates.rows(); ++l) {
      out -= softplus(-p->labels[l] * p->covariates.row(l).dot(beta));
    }
    return out;
  };
  t.parts = LikelihoodParts{prior_score, datum_score, static_cast<int>(L)};
  return t;
}

Eigen::VectorXd huber_score(const HuberRegressionParams& params, const Eigen::VectorXd& beta) {
  return make_huber_target(params).score(beta);
}

TargetModel make_huber_target(HuberRegressionParams params) {
  const auto L = params.covariates.rows();
  const auto d = params.covariates.cols();
  if (params.responses.size() != L) throw config_error("response count does not match covariates");
  if (params.threshold <= 0.0) throw config_error("huber threshold must be positive");
  if (params.prior_mean.size() != d) throw config_error("prior mean dimension mismatch");
  auto p = std::make_shared<HuberRegressionParams>(std::move(params));
  auto prior_llt = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(
      checked_llt(p->prior_cov, "prior covariance"));

  auto prior_score = [p, prior_llt](const Eigen::VectorXd& beta) {
    return (-prior_llt->solve(beta - p->prior_mean)).eval();
  };
  auto datum_score = [p](int l, const Eigen::VectorXd& beta) {
    const double r = p->responses[l] - p->covariates.row(l).dot(beta);
    const double clipped = std::min(std::max(r, -p->threshold), p->threshold);
    return (clipped * p->covariates.row(l).transpose()).eval();
  };

  TargetModel t;
  t.dim = static_cast<int>(d);
  t.score = [p, prior_score, datum_score](const Eigen::VectorXd& beta) {
    Eigen::VectorXd s = prior_score(beta);
    for (Eigen::Index l = 0; l < p->covariates.rows(); ++l) {
      s += datum_score(static_cast<int>(l), beta);
    }
    return s;
  };
  t.log_density = [p, prior_llt](const Eigen::VectorXd& beta) {
    const Eigen::VectorXd diff = beta - p->prior_mean;
    double out = -0.5 * diff.dot(prior_llt->solve(diff));
    const double c = p->threshold;
    for (Eigen::Index l = 0; l < p->covariates.rows(); ++l) {
      const double r = p->responses[l] - p->covariates.row(l).dot(beta);
      out -= std::abs(r) <= c ? 0.5 * r * r : c * (std::abs(r) - 0.5 * c);
    }
    return out;
  };
  t.parts = LikelihoodParts{prior_score, datum_score, static_cast<int>(L)};
  return t;
}

Eigen::VectorXd studentt_score(const StudentTRegressionParams& params,
                               const Eigen::VectorXd& beta) {
  return make_studentt_target(params).score(beta);
}

TargetModel make_studentt_target(StudentTRegressionParams params) {
  const auto L = params.design.rows();
  const auto d = params.design.cols();
  if (params.response.size() != L) throw config_error("response count does not match design");
  if (params.dof <= 0.0) throw config_error("degrees of freedom must be positive");
  if (params.scale <= 0.0) throw config_error("pseudo-Huber scale must be positive");
  if (params.noise_cov.rows() != L || params.noise_cov.cols() != L) {
    throw config_error("noise covariance must be L x L");
  }
  auto p = std::make_shared<StudentTRegressionParams>(std::move(params));
  auto noise_llt = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(
      checked_llt(p->noise_cov, "noise covariance"));

  // xi(beta) = 1 + (1/nu) (y - V beta)' Sigma^{-1} (y - V beta)
  auto xi_and_wres = [p, noise_llt](const Eigen::VectorXd& beta) {
    const Eigen::VectorXd r = p->response - p->design * beta;
    const Eigen::VectorXd w = noise_llt->solve(r);
    return std::pair<double, Eigen::VectorXd>(1.0 + r.dot(w) / p->dof, w);
  };
  auto prior_score = [p](const Eigen::VectorXd& beta) {
    const double delta = p->scale;
    return (-beta / std::sqrt(1.0 + beta.squaredNorm() / (delta * delta))).eval();
  };
  // Per-datum terms share the global scale xi(beta); they sum exactly to
  // the full likelihood score.
  auto datum_score = [p, xi_and_wres](int l, const Eigen::VectorXd& beta) {
    const auto [xi, w] = xi_and_wres(beta);
    const double factor = (p->dof + static_cast<double>(p->design.rows())) / p->dof;
    return (factor * w[l] / xi * p->design.row(l).transpose()).eval();
  };

  TargetModel t;
  t.dim = static_cast<int>(d);
  t.score = [p, xi_and_wres, prior_score](const Eigen::VectorXd& beta) {
    const auto [xi, w] = xi_and_wres(beta);
    const double factor = (p->dof + static_cast<double>(p->design.rows())) / p->dof;
    return (prior_score(beta) + factor / xi * p->design.transpose() * w).eval();
  };
  t.log_density = [p, xi_and_wres](const Eigen::VectorXd& beta) {
    const double delta = p->scale;
    const double prior =
        delta * delta * (1.0 - std::sqrt(1.0 + beta.squaredNorm() / (delta * delta)));
    const auto [xi, w] = xi_and_wres(beta);
    const double nu = p->dof;
    const auto Ld = static_cast<double>(p->design.rows());
    return prior - 0.5 * (nu + Ld) * std::log(xi);
  };
  t.parts = LikelihoodParts{prior_score, datum_score, static_cast<int>(L)};
  return t;
}

DiffusionSpec riemannian_pseudo_huber_spec(double delta, int dim) {
  if (delta <= 0.0) throw config_error("pseudo-Huber scale must be positive");
  if (dim < 1) throw config_error("riemannian_pseudo_huber_spec: dim must be >= 1");
  DiffusionSpec spec;
  spec.dim = dim;
  spec.a = [delta, dim](const Eigen::VectorXd& x) {
    const double root = std::sqrt(1.0 + x.squaredNorm() / (delta * delta));
    return (root * Eigen::MatrixXd::Identity(dim, dim)).eval();
  };
  spec.c = [dim](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(dim, dim).eval(); };
  spec.div_m = [delta](const Eigen::VectorXd& x) {
    const double root = std::sqrt(1.0 + x.squaredNorm() / (delta * delta));
    return (x / (delta * delta * root)).eval();
  };
  spec.constant = false;
  return spec;
}

TargetModel second_order_target(const TargetModel& base) {
  const int d = base.dim;
  TargetModel t;
  t.dim = 2 * d;
  auto base_score = base.score;
  t.score = [base_score, d](const Eigen::VectorXd& z) {
    Eigen::VectorXd s(2 * d);
    s.head(d) = base_score(z.head(d));
    s.tail(d) = -z.tail(d);
    return s;
  };
  if (base.log_density) {
    auto base_ld = *base.log_density;
    t.log_density = [base_ld, d](const Eigen::VectorXd& z) {
      return base_ld(z.head(d)) - 0.5 * z.tail(d).squaredNorm();
    };
  }
  if (base.sampler) {
    auto base_sampler = *base.sampler;
    t.sampler = [base_sampler, d](Rng& rng) {
      Eigen::VectorXd z(2 * d);
      z.head(d) = base_sampler(rng);
      z.tail(d) = rng.normal_vector(d);
      return z;
    };
  }
  return t;
}

}  // namespace steinbench

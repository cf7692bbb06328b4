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

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>

#include "steinbench/errors.hpp"
#include "steinbench/log.hpp"

namespace steinbench {
namespace {

void check_chain_config(const ChainConfig& cfg, int dim, int likelihood_count) {
  if (cfg.epsilon <= 0.0) throw config_error("step size must be positive");
  if (cfg.n_steps < 1) throw config_error("n_steps must be >= 1");
  if (cfg.thin < 1) throw config_error("thinning interval must be >= 1");
  if (cfg.burn_in < 0.0 || cfg.burn_in >= 1.0) throw config_error("burn-in fraction in [0, 1)");
  if (cfg.init.size() != dim) throw config_error("initial state dimension mismatch");
  if (cfg.minibatch < 0 || (likelihood_count > 0 && cfg.minibatch > likelihood_count)) {
    throw config_error("minibatch size out of range");
  }
}

long burn_steps(const ChainConfig& cfg) {
  return static_cast<long>(std::floor(cfg.burn_in * static_cast<double>(cfg.n_steps)));
}

}  // namespace

double mala_log_accept(const TargetModel& target, const Eigen::VectorXd& from,
                       const Eigen::VectorXd& to, double epsilon) {
  if (!target.log_density) throw config_error("MALA requires a target log density");
  const auto& log_p = *target.log_density;
  auto log_q = [&](const Eigen::VectorXd& dst, const Eigen::VectorXd& src) {
    const Eigen::VectorXd mean = src + 0.5 * epsilon * target.score(src);
    return -(dst - mean).squaredNorm() / (2.0 * epsilon);
  };
  return log_p(to) - log_p(from) + log_q(from, to) - log_q(to, from);
}

ChainResult mala_chain(const TargetModel& target, const ChainConfig& cfg) {
  check_chain_config(cfg, target.dim, 0);
  if (!target.log_density) throw config_error("MALA requires a target log density");
  Rng rng(cfg.seed);
  const long burn = burn_steps(cfg);
  const long kept = (cfg.n_steps - burn) / cfg.thin;
  if (kept < 1) throw config_error("no states kept; lower burn-in or thinning");

  Eigen::VectorXd beta = cfg.init;
  Eigen::MatrixXd states(kept, target.dim);
  long accepted = 0;
  long row = 0;
  for (long s = 1; s <= cfg.n_steps; ++s) {
    Eigen::VectorXd noise = cfg.zero_noise ? Eigen::VectorXd::Zero(target.dim)
                                           : rng.normal_vector(target.dim);
    const Eigen::VectorXd proposal =
        beta + 0.5 * cfg.epsilon * target.score(beta) + std::sqrt(cfg.epsilon) * noise;
    const double log_alpha = mala_log_accept(target, beta, proposal, cfg.epsilon);
    const double u = rng.uniform();
    if (std::log(u) <= log_alpha) {
      beta = proposal;
      ++accepted;
    }
    if (s > burn && (s - burn) % cfg.thin == 0 && row < kept) {
      states.row(row++) = beta;
    }
  }
  ChainResult result{WeightedSample::uniform_collapsed(states.topRows(row)),
                     {static_cast<double>(accepted) / static_cast<double>(cfg.n_steps), row}};
  log_info("mala: steps=%ld accept=%.3f kept=%ld", cfg.n_steps, result.stats.accept_rate, row);
  return result;
}

RiemannianMetric pseudo_huber_metric(double delta) {
  if (delta <= 0.0) throw config_error("pseudo-Huber scale must be positive");
  RiemannianMetric metric;
  metric.ginv = [delta](const Eigen::VectorXd& x) {
    const double lambda_inv = 2.0 * std::sqrt(1.0 + x.squaredNorm() / (delta * delta));
    return (lambda_inv * Eigen::MatrixXd::Identity(x.size(), x.size())).eval();
  };
  // For scalar metrics lambda(x) I the correction is -lambda^{-2} grad lambda,
  // which here equals grad of the inverse scale.
  metric.correction = [delta](const Eigen::VectorXd& x) {
    const double root = std::sqrt(1.0 + x.squaredNorm() / (delta * delta));
    return (2.0 * x / (delta * delta * root)).eval();
  };
  return metric;
}

Eigen::VectorXd minibatch_score(const TargetModel& target, const Eigen::VectorXd& beta,
                                const std::vector<int>& batch) {
  if (!target.parts) throw config_error("minibatch gradients require per-datum score terms");
  const auto& parts = *target.parts;
  Eigen::VectorXd s = parts.prior_score(beta);
  if (batch.empty()) return s;
  Eigen::VectorXd lik = Eigen::VectorXd::Zero(beta.size());
  for (const int l : batch) {
    if (l < 0 || l >= parts.count) throw config_error("minibatch index out of range");
    lik += parts.datum_score(l, beta);
  }
  const double rescale = static_cast<double>(parts.count) / static_cast<double>(batch.size());
  return s + rescale * lik;
}

ChainResult sgrld_chain(const TargetModel& target, const RiemannianMetric& metric,
                        const ChainConfig& cfg) {
  const int likelihood_count = target.parts ? target.parts->count : 0;
  check_chain_config(cfg, target.dim, likelihood_count);
  if (cfg.minibatch > 0 && !target.parts) {
    throw config_error("SGRLD minibatching requires per-datum score terms");
  }
  Rng rng(cfg.seed);
  const long burn = burn_steps(cfg);
  const long kept = (cfg.n_steps - burn) / cfg.thin;
  if (kept < 1) throw config_error("no states kept; lower burn-in or thinning");

  Eigen::VectorXd beta = cfg.init;
  Eigen::MatrixXd states(kept, target.dim);
  long row = 0;
  for (long s = 1; s <= cfg.n_steps; ++s) {
    const Eigen::MatrixXd ginv = metric.ginv(beta);
    Eigen::LLT<Eigen::MatrixXd> llt(ginv);
    if (llt.info() != Eigen::Success) {
      std::ostringstream oss;
      oss << "metric inverse not SPD at state [" << beta.transpose() << "]";
      throw solver_error(oss.str());
    }
    Eigen::VectorXd grad;
    if (cfg.minibatch > 0 && cfg.minibatch < likelihood_count) {
      grad = minibatch_score(target, beta, rng.subset(likelihood_count, cfg.minibatch));
    } else {
      grad = target.score(beta);
    }
    beta += 0.5 * cfg.epsilon * (ginv * grad + metric.correction(beta));
    if (!cfg.zero_noise) {
      const Eigen::VectorXd noise = llt.matrixL() * rng.normal_vector(target.dim);
      beta += std::sqrt(cfg.epsilon) * noise;
    }
    if (!beta.allFinite()) {
      throw solver_error("SGRLD diverged at step " + std::to_string(s));
    }
    if (s > burn && (s - burn) % cfg.thin == 0 && row < kept) {
      states.row(row++) = beta;
    }
  }
  ChainResult result{WeightedSample::uniform_collapsed(states.topRows(row)), {1.0, row}};
  log_info("sgrld: steps=%ld kept=%ld", cfg.n_steps, row);
  return result;
}

}  // namespace steinbench

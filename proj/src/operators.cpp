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

#include "steinbench/operators.hpp"

#include <cmath>

#include "steinbench/errors.hpp"

namespace steinbench {

OperatorData drift_constant(const Eigen::MatrixXd& m, const TargetModel& target,
                            const Eigen::MatrixXd& points) {
  const auto d = points.cols();
  if (m.rows() != d || m.cols() != d) {
    throw config_error("coefficient matrix dimension does not match points");
  }
  if (target.dim != d) throw config_error("target dimension does not match points");
  const auto n = points.rows();
  OperatorData op;
  op.b_vals.resize(n, d);
  op.m_vals.assign(static_cast<std::size_t>(n), m);
  for (Eigen::Index i = 0; i < n; ++i) {
    op.b_vals.row(i) = 0.5 * (m * target.score(points.row(i))).transpose();
  }
  if (!op.b_vals.allFinite()) throw solver_error("non-finite drift value");
  return op;
}

OperatorData drift_general(const DiffusionSpec& spec, const TargetModel& target,
                           const Eigen::MatrixXd& points) {
  const auto d = points.cols();
  if (spec.dim != d) throw config_error("diffusion dimension does not match points");
  if (target.dim != d) throw config_error("target dimension does not match points");
  if (spec.constant) {
    // Same arithmetic as drift_constant so constant specs agree exactly.
    return drift_constant(spec.m(Eigen::VectorXd::Zero(d)), target, points);
  }
  if (!spec.div_m) {
    throw config_error("non-constant diffusion requires div_m (see with_fd_div_m)");
  }
  const auto n = points.rows();
  OperatorData op;
  op.b_vals.resize(n, d);
  op.m_vals.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd x = points.row(i);
    const Eigen::MatrixXd m = spec.m(x);
    op.m_vals[static_cast<std::size_t>(i)] = m;
    op.b_vals.row(i) = 0.5 * (m * target.score(x) + (*spec.div_m)(x)).transpose();
  }
  if (!op.b_vals.allFinite()) throw solver_error("non-finite drift value");
  return op;
}

Eigen::VectorXd apply_operator(const OperatorData& op, const Eigen::MatrixXd& g_vals,
                               const std::vector<Eigen::MatrixXd>& grad_g_vals) {
  const auto n = op.b_vals.rows();
  const auto d = op.b_vals.cols();
  if (g_vals.rows() != n || g_vals.cols() != d ||
      grad_g_vals.size() != static_cast<std::size_t>(n)) {
    throw config_error("apply_operator: shape mismatch");
  }
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& grad = grad_g_vals[static_cast<std::size_t>(i)];
    if (grad.rows() != d || grad.cols() != d) {
      throw config_error("apply_operator: gradient shape mismatch");
    }
    out[i] = 2.0 * op.b_vals.row(i).dot(g_vals.row(i)) +
             op.m_vals[static_cast<std::size_t>(i)].cwiseProduct(grad).sum();
  }
  return out;
}

MeanZeroResult mean_zero_check(const TargetModel& target, const DiffusionSpec& spec,
                               const TestFunction& g, long n_mc, std::uint64_t seed) {
  if (!target.sampler) {
    throw config_error("mean_zero_check requires a target with an exact sampler");
  }
  if (n_mc < 2) throw config_error("mean_zero_check: n_mc must be >= 2");
  Rng rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long i = 0; i < n_mc; ++i) {
    const Eigen::VectorXd z = (*target.sampler)(rng);
    const Eigen::MatrixXd m = spec.m(z);
    Eigen::VectorXd b = 0.5 * m * target.score(z);
    if (!spec.constant) {
      if (!spec.div_m) throw config_error("non-constant diffusion requires div_m");
      b += 0.5 * (*spec.div_m)(z);
    }
    const double h = 2.0 * b.dot(g.g(z)) + m.cwiseProduct(g.grad(z)).sum();
    sum += h;
    sum_sq += h * h;
  }
  MeanZeroResult result;
  const auto n = static_cast<double>(n_mc);
  result.estimate = sum / n;
  const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
  result.std_error = std::sqrt(var / n);
  result.pass = std::abs(result.estimate) <= 4.0 * result.std_error;
  return result;
}

}  // namespace steinbench

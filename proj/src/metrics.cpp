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

#include "steinbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "steinbench/errors.hpp"
#include "steinbench/operators.hpp"

namespace steinbench {
namespace {

std::vector<std::pair<double, double>> sorted_support(const WeightedSample& s) {
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    out[static_cast<std::size_t>(i)] = {s.points()(i, 0), s.weights()[i]};
  }
  std::sort(out.begin(), out.end());
  return out;
}

double matrix_l1_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

double wasserstein_1d(const WeightedSample& s1, const WeightedSample& s2) {
  if (s1.dim() != 1 || s2.dim() != 1) throw config_error("wasserstein_1d requires d = 1");
  const auto a = sorted_support(s1);
  const auto b = sorted_support(s2);
  std::vector<double> breaks;
  breaks.reserve(a.size() + b.size());
  for (const auto& [x, w] : a) breaks.push_back(x);
  for (const auto& [x, w] : b) breaks.push_back(x);
  std::sort(breaks.begin(), breaks.end());
  double integral = 0.0;
  double f1 = 0.0, f2 = 0.0;
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k + 1 <= breaks.size(); ++k) {
    const double x = breaks[k];
    while (ia < a.size() && a[ia].first == x) f1 += a[ia++].second;
    while (ib < b.size() && b[ib].first == x) f2 += b[ib++].second;
    if (k + 1 < breaks.size() && breaks[k + 1] > x) {
      integral += std::abs(f1 - f2) * (breaks[k + 1] - x);
    }
  }
  return integral;
}

double coupled_upper_bound(const WeightedSample& sample_q, const WeightedSample& sample_p,
                           const TargetModel& target, const DiffusionSpec& spec) {
  const auto d = sample_q.dim();
  if (sample_p.dim() != d) throw config_error("coupled samples must share a dimension");
  const OperatorData op_q = drift_general(spec, target, sample_q.points());
  const OperatorData op_p = drift_general(spec, target, sample_p.points());

  auto term = [&](Eigen::Index i, Eigen::Index j) {
    const double dist = (sample_q.points().row(i) - sample_p.points().row(j)).cwiseAbs().sum();
    const double b_diff = (op_q.b_vals.row(i) - op_p.b_vals.row(j)).cwiseAbs().sum();
    const double m_diff = matrix_l1_norm(op_q.m_vals[static_cast<std::size_t>(i)] -
                                         op_p.m_vals[static_cast<std::size_t>(j)]);
    const double b_z = op_p.b_vals.row(j).cwiseAbs().sum();
    const double m_z = matrix_l1_norm(op_p.m_vals[static_cast<std::size_t>(j)]);
    return 2.0 * b_diff + m_diff + (2.0 * b_z + m_z) * std::min(dist, 2.0);
  };

  if (d == 1) {
    // Quantile (sorted) coupling of the two 1-D measures.
    std::vector<Eigen::Index> oq(static_cast<std::size_t>(sample_q.size()));
    std::vector<Eigen::Index> op(static_cast<std::size_t>(sample_p.size()));
    std::iota(oq.begin(), oq.end(), Eigen::Index{0});
    std::iota(op.begin(), op.end(), Eigen::Index{0});
    std::sort(oq.begin(), oq.end(), [&](Eigen::Index x, Eigen::Index y) {
      return sample_q.points()(x, 0) < sample_q.points()(y, 0);
    });
    std::sort(op.begin(), op.end(), [&](Eigen::Index x, Eigen::Index y) {
      return sample_p.points()(x, 0) < sample_p.points()(y, 0);
    });
    double total = 0.0;
    std::size_t iq = 0, ip = 0;
    double rq = sample_q.weights()[oq[0]];
    double rp = sample_p.weights()[op[0]];
    while (true) {
      const double mass = std::min(rq, rp);
      total += mass * term(oq[iq], op[ip]);
      rq -= mass;
      rp -= mass;
      if (rq <= 1e-15) {
        if (++iq >= oq.size()) break;
        rq = sample_q.weights()[oq[iq]];
      }
      if (rp <= 1e-15) {
        if (++ip >= op.size()) break;
        rp = sample_p.weights()[op[ip]];
      }
    }
    return total;
  }

  // Greedy nearest-neighbor matching; requires equal-size uniform samples.
  if (sample_q.size() != sample_p.size()) {
    throw config_error("greedy coupling requires equal sample sizes for d > 1");
  }
  const auto n = sample_q.size();
  const double wq = 1.0 / static_cast<double>(n);
  if ((sample_q.weights().array() - wq).abs().maxCoeff() > 1e-12 ||
      (sample_p.weights().array() - wq).abs().maxCoeff() > 1e-12) {
    throw config_error("greedy coupling requires uniform weights for d > 1");
  }
  struct Pair {
    double dist;
    int i;
    int j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      pairs.push_back(
          {(sample_q.points().row(i) - sample_p.points().row(j)).cwiseAbs().sum(),
           static_cast<int>(i), static_cast<int>(j)});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<char> used_q(static_cast<std::size_t>(n), 0);
  std::vector<char> used_p(static_cast<std::size_t>(n), 0);
  double total = 0.0;
  Eigen::Index matched = 0;
  for (const auto& pair : pairs) {
    if (used_q[static_cast<std::size_t>(pair.i)] || used_p[static_cast<std::size_t>(pair.j)]) {
      continue;
    }
    used_q[static_cast<std::size_t>(pair.i)] = 1;
    used_p[static_cast<std::size_t>(pair.j)] = 1;
    total += wq * term(pair.i, pair.j);
    if (++matched == n) break;
  }
  return total;
}

TrendFit fit_rate(const std::vector<std::pair<long, double>>& values) {
  if (values.size() < 3) throw config_error("fit_rate needs at least 3 sample sizes");
  TrendFit fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto [n, s] = values[k];
    if (k > 0 && n <= values[k - 1].first) {
      throw config_error("fit_rate sizes must be strictly increasing");
    }
    if (s <= 0.0) throw config_error("fit_rate requires positive discrepancy values");
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(s);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    fit.sizes.push_back(n);
  }
  const auto m = static_cast<double>(values.size());
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  double rss = 0.0;
  for (const auto& [n, s] : values) {
    const double pred = fit.intercept + fit.slope * std::log(static_cast<double>(n));
    rss += (std::log(s) - pred) * (std::log(s) - pred);
  }
  fit.residual_rms = std::sqrt(rss / m);
  return fit;
}

}  // namespace steinbench

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

#include <vector>

#include "steinbench/diffusion.hpp"
#include "steinbench/sample.hpp"
#include "steinbench/target.hpp"

namespace steinbench {

/// Exact L1 Wasserstein distance between two 1-D weighted samples, via
/// the integral of |F1 - F2| over the merged breakpoint partition.
double wasserstein_1d(const WeightedSample& s1, const WeightedSample& s2);

/// Empirical evaluation of the coupling upper bound on the diffusion
/// Stein discrepancy,
///   E[ 2|b(X)-b(Z)|_1 + |m(X)-m(Z)| + (2|b(Z)|_1 + |m(Z)|) min(|X-Z|_1, 2) ],
/// at an explicit coupling of Q and a reference sample from P (sorted
/// quantile coupling in 1-D, greedy nearest-neighbor matching of
/// equal-size uniform samples otherwise). Matrix norms are the
/// l1-induced operator norm.
double coupled_upper_bound(const WeightedSample& sample_q, const WeightedSample& sample_p,
                           const TargetModel& target, const DiffusionSpec& spec);

struct TrendFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  std::vector<long> sizes;
};

/// Ordinary least squares of log S against log n.
TrendFit fit_rate(const std::vector<std::pair<long, double>>& values);

}  // namespace steinbench

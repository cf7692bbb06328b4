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

#include "steinbench/diffusion.hpp"
#include "steinbench/target.hpp"

namespace steinbench {

/// Diffusion Stein operator coefficients evaluated at sample points:
/// the drift b(x_i) = (m(x_i) score(x_i) + div m(x_i)) / 2 and
/// m(x_i) = a(x_i) + c(x_i). The operator acts on discrete function
/// values as (T g)(x_i) = 2 <b(x_i), g(x_i)> + <m(x_i), grad g(x_i)>_F.
struct OperatorData {
  Eigen::MatrixXd b_vals;               // n x d
  std::vector<Eigen::MatrixXd> m_vals;  // n matrices, d x d
};

/// Constant-coefficient drift: b(x_i) = (1/2) m score(x_i).
OperatorData drift_constant(const Eigen::MatrixXd& m, const TargetModel& target,
                            const Eigen::MatrixXd& points);

/// General drift from a DiffusionSpec. Non-constant specs must provide
/// div_m (see with_fd_div_m for the finite-difference fallback). Constant
/// specs reproduce drift_constant bit-for-bit.
OperatorData drift_general(const DiffusionSpec& spec, const TargetModel& target,
                           const Eigen::MatrixXd& points);

/// Applies the operator to function values: g_vals is n x d with row i
/// holding g(x_i); grad_g_vals[i](j,k) = d g_j / d x_k at x_i.
Eigen::VectorXd apply_operator(const OperatorData& op, const Eigen::MatrixXd& g_vals,
                               const std::vector<Eigen::MatrixXd>& grad_g_vals);

/// Smooth vector test function with analytic Jacobian, used by the
/// mean-zero Monte Carlo check. grad(x)(j,k) = d g_j / d x_k.
struct TestFunction {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> g;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> grad;
};

struct MeanZeroResult {
  double estimate = 0.0;
  double std_error = 0.0;
  bool pass = false;  // |estimate| <= 4 std_error
};

/// Monte Carlo estimate of E_P[(T g)(Z)] with Z drawn from the target's
/// exact sampler. Requires target.sampler.
MeanZeroResult mean_zero_check(const TargetModel& target, const DiffusionSpec& spec,
                               const TestFunction& g, long n_mc, std::uint64_t seed);

}  // namespace steinbench

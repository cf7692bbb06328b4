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

namespace steinbench {

/// Coefficients of a P-invariant Ito diffusion: covariance coefficient
/// a(x) (symmetric PSD), stream coefficient c(x) (skew-symmetric), and,
/// for non-constant coefficients, the analytic row divergence of
/// m(x) = a(x) + c(x).
struct DiffusionSpec {
  int dim = 0;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> a;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> c;
  std::optional<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>> div_m;
  bool constant = false;

  Eigen::MatrixXd m(const Eigen::VectorXd& x) const { return a(x) + c(x); }
};

/// a = I, c = 0 (overdamped Langevin).
DiffusionSpec langevin_spec(int dim);

/// Constant a, c = 0 (preconditioned Langevin). `a` must be symmetric PSD.
DiffusionSpec preconditioned_spec(Eigen::MatrixXd a);

/// Constant a and skew-symmetric c (non-reversible preconditioned Langevin).
DiffusionSpec nonreversible_spec(Eigen::MatrixXd a, Eigen::MatrixXd c);

/// Second-order (underdamped) Langevin on the doubled space R^{2d}:
/// a = 2[[0,0],[0,I]], c = 2[[0,-I],[I,0]]. The matching joint target is
/// built by `second_order_target`.
DiffusionSpec second_order_spec(int base_dim);

struct DiffusionValidation {
  double max_symmetry_residual = 0.0;
  double min_a_eigenvalue = 0.0;
  double max_skew_residual = 0.0;
  bool pass = false;
};

/// Checks a(x) symmetric PSD (symmetry within 1e-12, eigenvalues
/// >= -1e-10) and c(x) + c(x)^T = 0 within 1e-12 at the probe points.
DiffusionValidation validate_diffusion(const DiffusionSpec& spec,
                                       const std::vector<Eigen::VectorXd>& probes);

/// Returns a copy of `spec` whose div_m is computed by central finite
/// differences of m's rows (step 1e-5 * (1 + |x|_inf)). Opt-in fallback
/// for specs without an analytic divergence.
DiffusionSpec with_fd_div_m(DiffusionSpec spec);

}  // namespace steinbench

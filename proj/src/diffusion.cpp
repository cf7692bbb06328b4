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

#include "steinbench/diffusion.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "steinbench/errors.hpp"

namespace steinbench {

DiffusionSpec langevin_spec(int dim) {
  if (dim < 1) throw config_error("langevin_spec: dim must be >= 1");
  DiffusionSpec spec;
  spec.dim = dim;
  spec.a = [dim](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(dim, dim).eval(); };
  spec.c = [dim](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(dim, dim).eval(); };
  spec.constant = true;
  return spec;
}

DiffusionSpec preconditioned_spec(Eigen::MatrixXd a) {
  const auto dim = a.rows();
  return nonreversible_spec(std::move(a), Eigen::MatrixXd::Zero(dim, dim));
}

DiffusionSpec nonreversible_spec(Eigen::MatrixXd a, Eigen::MatrixXd c) {
  const auto dim = a.rows();
  if (dim < 1 || a.cols() != dim) throw config_error("covariance coefficient must be square");
  if (c.rows() != dim || c.cols() != dim) {
    throw config_error("stream coefficient shape does not match covariance coefficient");
  }
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw config_error("covariance coefficient is not symmetric");
  }
  if ((c + c.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw config_error("stream coefficient is not skew-symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw config_error("covariance coefficient is not positive semidefinite");
  }
  DiffusionSpec spec;
  spec.dim = static_cast<int>(dim);
  spec.a = [a = std::move(a)](const Eigen::VectorXd&) { return a; };
  spec.c = [c = std::move(c)](const Eigen::VectorXd&) { return c; };
  spec.constant = true;
  return spec;
}

DiffusionSpec second_order_spec(int base_dim) {
  if (base_dim < 1) throw config_error("second_order_spec: dim must be >= 1");
  const int d = base_dim;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  a.block(d, d, d, d) = 2.0 * Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  c.block(0, d, d, d) = -2.0 * Eigen::MatrixXd::Identity(d, d);
  c.block(d, 0, d, d) = 2.0 * Eigen::MatrixXd::Identity(d, d);
  return nonreversible_spec(std::move(a), std::move(c));
}

DiffusionValidation validate_diffusion(const DiffusionSpec& spec,
                                       const std::vector<Eigen::VectorXd>& probes) {
  DiffusionValidation report;
  report.min_a_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& x : probes) {
    const Eigen::MatrixXd a = spec.a(x);
    const Eigen::MatrixXd c = spec.c(x);
    report.max_symmetry_residual =
        std::max(report.max_symmetry_residual, (a - a.transpose()).cwiseAbs().maxCoeff());
    report.max_skew_residual =
        std::max(report.max_skew_residual, (c + c.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (a + a.transpose()));
    report.min_a_eigenvalue = std::min(report.min_a_eigenvalue, eig.eigenvalues().minCoeff());
  }
  report.pass = report.max_symmetry_residual <= 1e-12 &&
                report.max_skew_residual <= 1e-12 && report.min_a_eigenvalue >= -1e-10;
  return report;
}

DiffusionSpec with_fd_div_m(DiffusionSpec spec) {
  auto a = spec.a;
  auto c = spec.c;
  const int dim = spec.dim;
  spec.div_m = [a, c, dim](const Eigen::VectorXd& x) {
    const double h = 1e-5 * (1.0 + x.cwiseAbs().maxCoeff());
    Eigen::VectorXd div = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd xp = x;
    for (int k = 0; k < dim; ++k) {
      xp[k] = x[k] + h;
      const Eigen::MatrixXd mp = a(xp) + c(xp);
      xp[k] = x[k] - h;
      const Eigen::MatrixXd mm = a(xp) + c(xp);
      xp[k] = x[k];
      div += (mp.col(k) - mm.col(k)) / (2.0 * h);
    }
    return div;
  };
  return spec;
}

}  // namespace steinbench

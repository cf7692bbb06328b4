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

#include "steinbench/target.hpp"

#include <cmath>

#include "steinbench/errors.hpp"

namespace steinbench {

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h_scale) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = h_scale * (1.0 + std::abs(x[k]));
    xp[k] = x[k] + h;
    const double fp = f(xp);
    xp[k] = x[k] - h;
    const double fm = f(xp);
    xp[k] = x[k];
    g[k] = (fp - fm) / (2.0 * h);
  }
  return g;
}

TargetValidation validate_target(const TargetModel& target,
                                 const std::vector<Eigen::VectorXd>& probes) {
  if (!target.log_density) {
    throw config_error("validate_target requires a log_density");
  }
  TargetValidation report;
  for (const auto& x : probes) {
    if (x.size() != target.dim) {
      throw config_error("probe dimension " + std::to_string(x.size()) +
                         " does not match target dim " + std::to_string(target.dim));
    }
    const Eigen::VectorXd s = target.score(x);
    if (s.size() != target.dim) {
      throw config_error("score output dimension does not match target dim");
    }
    const Eigen::VectorXd fd = fd_gradient(*target.log_density, x);
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    const double dev = (fd - s).cwiseAbs().maxCoeff() / scale;
    report.max_rel_deviation = std::max(report.max_rel_deviation, dev);
  }
  report.pass = report.max_rel_deviation <= 1e-4;
  return report;
}

}  // namespace steinbench

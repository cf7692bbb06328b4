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
#include <string>

#include "steinbench/errors.hpp"

namespace steinbench {

/// Discrete measure over n distinct support points in R^d with strictly
/// positive probability weights summing to one.
///
/// Invariants are enforced on every construction path: points pairwise
/// distinct under exact (bitwise-value) comparison, all entries finite,
/// weights positive with |sum - 1| <= 1e-9. Immutable after construction.
class WeightedSample {
 public:
  WeightedSample(Eigen::MatrixXd points, Eigen::VectorXd weights);

  /// Uniform weights 1/n on the given support.
  static WeightedSample uniform(Eigen::MatrixXd points);

  /// Uniform weights on the distinct rows of `points`; exact duplicates
  /// are merged and their mass accumulated. Used by the chain samplers,
  /// whose thinned output can repeat a state after rejections.
  static WeightedSample uniform_collapsed(const Eigen::MatrixXd& points);

  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  Eigen::VectorXd point(Eigen::Index i) const { return points_.row(i); }

  /// First n points, re-weighted uniformly (duplicates collapsed).
  WeightedSample prefix(Eigen::Index n) const;

 private:
  Eigen::MatrixXd points_;
  Eigen::VectorXd weights_;
};

enum class WeightMode { uniform, column };

/// Reads a sample from CSV: one point per row, comma-separated, optional
/// header rows starting with '#'. In column mode the trailing column holds
/// the probability weights, which must sum to 1 within 1e-9 (rejected
/// otherwise, never rescaled).
WeightedSample load_sample(const std::string& path, WeightMode mode);

/// Writes a sample as CSV with round-trip-exact number formatting. Column
/// mode appends the weights as a trailing column.
void save_sample(const std::string& path, const WeightedSample& sample,
                 WeightMode mode);

/// Reads a plain numeric CSV matrix (same syntax as load_sample, no
/// weight handling, duplicate rows allowed).
Eigen::MatrixXd load_matrix_csv(const std::string& path);

}  // namespace steinbench

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
#include <limits>
#include <span>
#include <vector>

namespace steinbench {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Linear program
///     maximize    objective . x
///     subject to  row_lb <= A x <= row_ub,   col_lb <= x <= col_ub
/// with A stored row-wise (CSR). Either side of a row may be infinite.
struct SparseLp {
  int num_cols = 0;
  Eigen::VectorXd objective;
  Eigen::VectorXd col_lb, col_ub;
  std::vector<int> row_start{0};
  std::vector<int> col_index;
  std::vector<double> coeff;
  std::vector<double> row_lb, row_ub;

  explicit SparseLp(int cols = 0)
      : num_cols(cols),
        objective(Eigen::VectorXd::Zero(cols)),
        col_lb(Eigen::VectorXd::Constant(cols, -kInfinity)),
        col_ub(Eigen::VectorXd::Constant(cols, kInfinity)) {}

  int num_rows() const { return static_cast<int>(row_lb.size()); }
  int nnz() const { return static_cast<int>(coeff.size()); }

  void add_row(std::span<const int> cols, std::span<const double> vals, double lb, double ub) {
    col_index.insert(col_index.end(), cols.begin(), cols.end());
    coeff.insert(coeff.end(), vals.begin(), vals.end());
    row_start.push_back(static_cast<int>(col_index.size()));
    row_lb.push_back(lb);
    row_ub.push_back(ub);
  }

  /// Row activities A x.
  Eigen::VectorXd activity(const Eigen::VectorXd& x) const;

  /// Max bound violation of x over rows and columns.
  double max_violation(const Eigen::VectorXd& x) const;
};

enum class SolveStatus { optimal, iteration_limit };

struct SimplexOptions {
  double feas_tol = 1e-9;      // absolute, on the rows as given
  double opt_tol = 1e-9;       // reduced-cost eligibility threshold
  double pivot_tol = 1e-10;    // smallest usable ratio-test entry
  long max_iterations = -1;    // -1: scale-based default
  int refactor_interval = 100;
};

struct SimplexResult {
  SolveStatus status = SolveStatus::optimal;
  double objective = 0.0;
  Eigen::VectorXd x;
  long iterations = 0;
  double primal_residual = 0.0;  // max violation at the returned x
  double dual_gap = 0.0;         // residual improvement bound, relative
};

/// Bounded-variable primal simplex on the sparse constraint matrix.
/// Devex pricing (with a Bland's-rule fallback after degenerate stalls);
/// the basis is held as a sparse LU of the structural kernel plus
/// product-form updates, refactorized periodically.
///
/// Starts from the all-logical basis at x = 0, which must be feasible
/// (all bound intervals contain 0); the Stein LPs guarantee this.
SimplexResult solve_bounded_lp(const SparseLp& lp, const SimplexOptions& opts = {});

/// Pluggable LP backend. The built-in simplex is the default; an adapter
/// for an external solver only needs to implement `solve`.
class LpBackend {
 public:
  virtual ~LpBackend() = default;
  virtual SimplexResult solve(const SparseLp& lp) const = 0;
};

class BuiltinSimplex final : public LpBackend {
 public:
  explicit BuiltinSimplex(SimplexOptions opts = {}) : opts_(opts) {}
  SimplexResult solve(const SparseLp& lp) const override { return solve_bounded_lp(lp, opts_); }

 private:
  SimplexOptions opts_;
};

}  // namespace steinbench

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

#include "steinbench/simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "steinbench/errors.hpp"
#include "steinbench/log.hpp"

namespace steinbench {

Eigen::VectorXd SparseLp::activity(const Eigen::VectorXd& x) const {
  Eigen::VectorXd act = Eigen::VectorXd::Zero(num_rows());
  for (int r = 0; r < num_rows(); ++r) {
    double s = 0.0;
    for (int k = row_start[r]; k < row_start[r + 1]; ++k) s += coeff[k] * x[col_index[k]];
    act[r] = s;
  }
  return act;
}

double SparseLp::max_violation(const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (int j = 0; j < num_cols; ++j) {
    v = std::max(v, std::max(col_lb[j] - x[j], x[j] - col_ub[j]));
  }
  const Eigen::VectorXd act = activity(x);
  for (int r = 0; r < num_rows(); ++r) {
    v = std::max(v, std::max(row_lb[r] - act[r], act[r] - row_ub[r]));
  }
  return std::max(v, 0.0);
}

namespace {

// Presolve: absolute-value constraints arrive as adjacent row pairs with
// negated coefficients; fold each pair into one two-sided range row.
SparseLp merge_opposed_pairs(const SparseLp& lp) {
  SparseLp out(lp.num_cols);
  out.objective = lp.objective;
  out.col_lb = lp.col_lb;
  out.col_ub = lp.col_ub;
  const int m = lp.num_rows();
  std::vector<int> cols;
  std::vector<double> vals;
  for (int r = 0; r < m; ++r) {
    const int len = lp.row_start[r + 1] - lp.row_start[r];
    bool merged = false;
    if (r + 1 < m && lp.row_start[r + 2] - lp.row_start[r + 1] == len &&
        lp.row_lb[r] == -kInfinity && lp.row_lb[r + 1] == -kInfinity &&
        std::isfinite(lp.row_ub[r]) && std::isfinite(lp.row_ub[r + 1])) {
      merged = true;
      for (int k = 0; k < len; ++k) {
        const int a = lp.row_start[r] + k;
        const int b = lp.row_start[r + 1] + k;
        if (lp.col_index[a] != lp.col_index[b] || lp.coeff[a] != -lp.coeff[b]) {
          merged = false;
          break;
        }
      }
    }
    cols.assign(lp.col_index.begin() + lp.row_start[r],
                lp.col_index.begin() + lp.row_start[r + 1]);
    vals.assign(lp.coeff.begin() + lp.row_start[r], lp.coeff.begin() + lp.row_start[r + 1]);
    const double lb = merged ? -lp.row_ub[r + 1] : lp.row_lb[r];
    const double ub = lp.row_ub[r];
    if (merged) ++r;
    // Drop rows whose activity range under the column boxes already sits
    // inside the row bounds (with a margin covering summation error).
    double min_act = 0.0, max_act = 0.0, magnitude = 0.0;
    bool boxed = true;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const double c = vals[k];
      const double xl = lp.col_lb[cols[k]];
      const double xu = lp.col_ub[cols[k]];
      if (!std::isfinite(xl) || !std::isfinite(xu)) {
        boxed = false;
        break;
      }
      min_act += std::min(c * xl, c * xu);
      max_act += std::max(c * xl, c * xu);
      magnitude += std::abs(c) * std::max(std::abs(xl), std::abs(xu));
    }
    if (boxed) {
      const double margin = 1e-12 * (1.0 + magnitude);
      if (min_act - margin >= lb && max_act + margin <= ub) continue;
    }
    out.add_row(cols, vals, lb, ub);
  }
  return out;
}

// Bounded-variable primal simplex. Variables 0..n-1 are structural,
// n..n+m-1 are the row activities ("logicals"); the equality system is
// [A | -I] (x; s) = 0. The basis inverse is held as a sparse LU of the
// structural kernel (frozen at the last refactorization) composed with
// product-form eta updates. Nonbasic variables may rest at any value
// inside their bounds, which admits the all-logical start at x = 0.
class BoundedSimplex {
 public:
  BoundedSimplex(const SparseLp& lp, const SimplexOptions& opts) : lp_(lp), opts_(opts) {
    n_ = lp.num_cols;
    m_ = lp.num_rows();
    total_ = n_ + m_;
    build_scaled_columns();
    lb_.resize(total_);
    ub_.resize(total_);
    ftol_.resize(total_);
    cost_.assign(static_cast<std::size_t>(total_), 0.0);
    for (int j = 0; j < n_; ++j) {
      lb_[j] = lp.col_lb[j];
      ub_[j] = lp.col_ub[j];
      ftol_[j] = opts.feas_tol;
      cost_[static_cast<std::size_t>(j)] = lp.objective[j];
    }
    for (int r = 0; r < m_; ++r) {
      lb_[n_ + r] = lp.row_lb[r] * row_scale_[static_cast<std::size_t>(r)];
      ub_[n_ + r] = lp.row_ub[r] * row_scale_[static_cast<std::size_t>(r)];
      ftol_[n_ + r] = opts.feas_tol * row_scale_[static_cast<std::size_t>(r)];
    }
    for (int v = 0; v < total_; ++v) {
      if (lb_[v] > 1e-12 || ub_[v] < -1e-12) {
        throw config_error("LP is not feasible at the all-slack start (0 outside bounds)");
      }
    }
    xval_.assign(static_cast<std::size_t>(total_), 0.0);
    state_.assign(static_cast<std::size_t>(total_), -1);
    basic_.resize(static_cast<std::size_t>(m_));
    for (int r = 0; r < m_; ++r) {
      basic_[static_cast<std::size_t>(r)] = n_ + r;
      state_[static_cast<std::size_t>(n_ + r)] = r;
    }
    max_iter_ = opts.max_iterations > 0 ? opts.max_iterations
                                        : 50000 + 20L * static_cast<long>(total_);
    const char* env_budget = std::getenv("STEINBENCH_ETA_BUDGET");
    eta_budget_ = static_cast<std::size_t>((env_budget ? atoi(env_budget) : 24)) *
                      static_cast<std::size_t>(m_) + 4096;
    stall_limit_ = 500 + total_ / 10;
    devex_weight_.assign(static_cast<std::size_t>(total_), 1.0);
    reduced_.assign(static_cast<std::size_t>(total_), 0.0);
  }

  SimplexResult run() {
    refactorize();
    recompute_basics();
    bool prices_valid = false;
    long iter = 0;
    long stall = 0;
    bool bland = false;
    SimplexResult result;
    while (true) {
      if (iter >= max_iter_) {
        result.status = SolveStatus::iteration_limit;
        break;
      }
      if (!prices_valid) {
        price();
        prices_valid = true;
      }
      const int q = bland ? select_bland() : select_devex();
      if (q < 0) {
        if (dirty_) {
          refactorize();
          recompute_basics();
          dirty_ = false;
          prices_valid = false;
          continue;
        }
        result.status = SolveStatus::optimal;
        break;
      }
      ++iter;
      const double dq = reduced_[static_cast<std::size_t>(q)];
      const int dir = dq > 0.0 ? 1 : -1;
      ftran_column(q, work_w_, work_nz_);
      const double improvement = step(q, dir, dq);
      dirty_ = true;
      if (improvement > 1e-12 * (1.0 + std::abs(objective_estimate_))) {
        stall = 0;
        bland = false;
      } else if (++stall > stall_limit_) {
        bland = true;
      }
      if (pivots_since_refactor_ >= opts_.refactor_interval ||
          eta_nnz_ > eta_budget_) {
        refactorize();
        recompute_basics();
        dirty_ = false;
        prices_valid = false;
      }
      if ((iter & 0xfff) == 0) {
        log_debug("simplex iter=%ld obj=%.12g etas=%zu", iter, objective_estimate_,
                  etas_.size());
      }
    }
    result.iterations = iter;
    finalize(result);
    return result;
  }

 private:
  // Product-form updates, packed as parallel arrays to keep the memory
  // stream tight; spans are delimited by eta_start_.
  struct Eta {
    int pos;
    double pivot;
  };

  void build_scaled_columns() {
    row_scale_.assign(static_cast<std::size_t>(m_), 1.0);
    for (int r = 0; r < m_; ++r) {
      double mx = 0.0;
      for (int k = lp_.row_start[r]; k < lp_.row_start[r + 1]; ++k) {
        mx = std::max(mx, std::abs(lp_.coeff[k]));
      }
      if (mx > 0.0) row_scale_[static_cast<std::size_t>(r)] = 1.0 / std::clamp(mx, 1e-8, 1e8);
    }
    cptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int k = 0; k < lp_.nnz(); ++k) ++cptr_[static_cast<std::size_t>(lp_.col_index[k]) + 1];
    for (int j = 0; j < n_; ++j) {
      cptr_[static_cast<std::size_t>(j) + 1] += cptr_[static_cast<std::size_t>(j)];
    }
    crow_.resize(static_cast<std::size_t>(lp_.nnz()));
    cval_.resize(static_cast<std::size_t>(lp_.nnz()));
    std::vector<int> fill(cptr_.begin(), cptr_.end() - 1);
    for (int r = 0; r < m_; ++r) {
      for (int k = lp_.row_start[r]; k < lp_.row_start[r + 1]; ++k) {
        const int j = lp_.col_index[k];
        const int slot = fill[static_cast<std::size_t>(j)]++;
        crow_[static_cast<std::size_t>(slot)] = r;
        cval_[static_cast<std::size_t>(slot)] =
            lp_.coeff[k] * row_scale_[static_cast<std::size_t>(r)];
      }
    }
  }

  void refactorize() {
    etas_.clear();
    eta_idx_.clear();
    eta_val_.clear();
    eta_start_.assign(1, 0);
    eta_nnz_ = 0;
    pivots_since_refactor_ = 0;
    frozen_basic_ = basic_;
    kernel_row_of_.assign(static_cast<std::size_t>(m_), -1);
    kernel_rows_.clear();
    struct_positions_.clear();
    std::vector<char> covered(static_cast<std::size_t>(m_), 0);
    for (int p = 0; p < m_; ++p) {
      const int v = basic_[static_cast<std::size_t>(p)];
      if (v >= n_) covered[static_cast<std::size_t>(v - n_)] = 1;
    }
    for (int r = 0; r < m_; ++r) {
      if (!covered[static_cast<std::size_t>(r)]) {
        kernel_row_of_[static_cast<std::size_t>(r)] = static_cast<int>(kernel_rows_.size());
        kernel_rows_.push_back(r);
      }
    }
    for (int p = 0; p < m_; ++p) {
      if (basic_[static_cast<std::size_t>(p)] < n_) struct_positions_.push_back(p);
    }
    const int k = static_cast<int>(struct_positions_.size());
    if (static_cast<int>(kernel_rows_.size()) != k) {
      throw solver_error("inconsistent basis structure");
    }
    if (k == 0) return;
    std::vector<Eigen::Triplet<double>> trips;
    for (int j = 0; j < k; ++j) {
      const int var =
          basic_[static_cast<std::size_t>(struct_positions_[static_cast<std::size_t>(j)])];
      for (int s = cptr_[static_cast<std::size_t>(var)];
           s < cptr_[static_cast<std::size_t>(var) + 1]; ++s) {
        const int kr =
            kernel_row_of_[static_cast<std::size_t>(crow_[static_cast<std::size_t>(s)])];
        if (kr >= 0) trips.emplace_back(kr, j, cval_[static_cast<std::size_t>(s)]);
      }
    }
    Eigen::SparseMatrix<double> kernel(k, k);
    kernel.setFromTriplets(trips.begin(), trips.end());
    kernel_lu_.compute(kernel);
    if (kernel_lu_.info() != Eigen::Success) {
      throw solver_error("singular basis during refactorization");
    }
  }

  // Solves B0 z = rhs against the frozen factorization; rhs indexed by
  // row, z indexed by basis position.
  void base_ftran(const Eigen::VectorXd& rhs, Eigen::VectorXd& z) {
    const int k = static_cast<int>(struct_positions_.size());
    z.resize(m_);
    Eigen::VectorXd zk;
    if (k > 0) {
      Eigen::VectorXd rk(k);
      for (int t = 0; t < k; ++t) rk[t] = rhs[kernel_rows_[static_cast<std::size_t>(t)]];
      zk = kernel_lu_.solve(rk);
    }
    acc_ = -rhs;
    for (int j = 0; j < k; ++j) {
      const double zj = zk[j];
      if (zj == 0.0) continue;
      const int var =
          frozen_basic_[static_cast<std::size_t>(struct_positions_[static_cast<std::size_t>(j)])];
      for (int s = cptr_[static_cast<std::size_t>(var)];
           s < cptr_[static_cast<std::size_t>(var) + 1]; ++s) {
        const int r = crow_[static_cast<std::size_t>(s)];
        if (kernel_row_of_[static_cast<std::size_t>(r)] < 0) {
          acc_[r] += cval_[static_cast<std::size_t>(s)] * zj;
        }
      }
    }
    for (int p = 0; p < m_; ++p) {
      const int v = frozen_basic_[static_cast<std::size_t>(p)];
      z[p] = v >= n_ ? acc_[v - n_] : 0.0;
    }
    for (int j = 0; j < k; ++j) z[struct_positions_[static_cast<std::size_t>(j)]] = zk[j];
  }

  // Solves B0^T y = t against the frozen factorization; t indexed by
  // basis position, y indexed by row.
  void base_btran(const Eigen::VectorXd& t, Eigen::VectorXd& y) {
    const int k = static_cast<int>(struct_positions_.size());
    y.setZero(m_);
    for (int p = 0; p < m_; ++p) {
      const int v = frozen_basic_[static_cast<std::size_t>(p)];
      if (v >= n_) y[v - n_] = -t[p];
    }
    if (k == 0) return;
    Eigen::VectorXd rk(k);
    for (int j = 0; j < k; ++j) {
      const int pos = struct_positions_[static_cast<std::size_t>(j)];
      const int var = frozen_basic_[static_cast<std::size_t>(pos)];
      double s = t[pos];
      for (int idx = cptr_[static_cast<std::size_t>(var)];
           idx < cptr_[static_cast<std::size_t>(var) + 1]; ++idx) {
        const int r = crow_[static_cast<std::size_t>(idx)];
        if (kernel_row_of_[static_cast<std::size_t>(r)] < 0) {
          s -= cval_[static_cast<std::size_t>(idx)] * y[r];
        }
      }
      rk[j] = s;
    }
    Eigen::VectorXd yk = kernel_lu_.transpose().solve(rk);
    for (int t_idx = 0; t_idx < k; ++t_idx) {
      y[kernel_rows_[static_cast<std::size_t>(t_idx)]] = yk[t_idx];
    }
  }

  // w = B^{-1} (column of variable q in [A | -I]), with its nonzero list.
  void ftran_column(int q, Eigen::VectorXd& w, std::vector<int>& nz) {
    rhs_.setZero(m_);
    if (q < n_) {
      for (int s = cptr_[static_cast<std::size_t>(q)];
           s < cptr_[static_cast<std::size_t>(q) + 1]; ++s) {
        rhs_[crow_[static_cast<std::size_t>(s)]] = cval_[static_cast<std::size_t>(s)];
      }
    } else {
      rhs_[q - n_] = -1.0;
    }
    base_ftran(rhs_, w);
    for (std::size_t e = 0; e < etas_.size(); ++e) {
      w[etas_[e].pos] /= etas_[e].pivot;
      const double wp = w[etas_[e].pos];
      if (wp != 0.0) {
        for (std::size_t s = eta_start_[e]; s < eta_start_[e + 1]; ++s) {
          w[eta_idx_[s]] -= eta_val_[s] * wp;
        }
      }
    }
    nz.clear();
    if (m_ == 0) return;
    const double drop = 1e-12 * (1.0 + w.cwiseAbs().maxCoeff());
    for (int p = 0; p < m_; ++p) {
      if (std::abs(w[p]) > drop) nz.push_back(p);
    }
  }

  // Full pricing: y = B^{-T} c_B, reduced costs for every column.
  void price() {
    tvec_.resize(m_);
    for (int p = 0; p < m_; ++p) {
      tvec_[p] = cost_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(p)])];
    }
    for (std::size_t e = etas_.size(); e-- > 0;) {
      double s = tvec_[etas_[e].pos];
      for (std::size_t k = eta_start_[e]; k < eta_start_[e + 1]; ++k) {
        s -= eta_val_[k] * tvec_[eta_idx_[k]];
      }
      tvec_[etas_[e].pos] = s / etas_[e].pivot;
    }
    base_btran(tvec_, yrow_);
    std::fill(reduced_.begin(), reduced_.end(), 0.0);
    for (int j = 0; j < n_; ++j) {
      if (state_[static_cast<std::size_t>(j)] >= 0) continue;
      double d = cost_[static_cast<std::size_t>(j)];
      for (int s = cptr_[static_cast<std::size_t>(j)];
           s < cptr_[static_cast<std::size_t>(j) + 1]; ++s) {
        d -= cval_[static_cast<std::size_t>(s)] * yrow_[crow_[static_cast<std::size_t>(s)]];
      }
      reduced_[static_cast<std::size_t>(j)] = d;
    }
    for (int r = 0; r < m_; ++r) {
      if (state_[static_cast<std::size_t>(n_ + r)] >= 0) continue;
      reduced_[static_cast<std::size_t>(n_ + r)] = yrow_[r];
    }
  }

  bool eligible(int v) const {
    const double d = reduced_[static_cast<std::size_t>(v)];
    if (d > opts_.opt_tol && xval_[static_cast<std::size_t>(v)] < ub_[v] - 1e-12) return true;
    if (d < -opts_.opt_tol && xval_[static_cast<std::size_t>(v)] > lb_[v] + 1e-12) return true;
    return false;
  }

  // Devex pricing: approximate steepest edge with reference weights.
  int select_devex() const {
    int best = -1;
    double best_score = 0.0;
    for (int v = 0; v < total_; ++v) {
      if (state_[static_cast<std::size_t>(v)] >= 0) continue;
      if (!eligible(v)) continue;
      const double d = reduced_[static_cast<std::size_t>(v)];
      const double score = d * d / devex_weight_[static_cast<std::size_t>(v)];
      if (score > best_score) {
        best_score = score;
        best = v;
      }
    }
    return best;
  }

  int select_bland() const {
    for (int v = 0; v < total_; ++v) {
      if (state_[static_cast<std::size_t>(v)] >= 0) continue;
      if (eligible(v)) return v;
    }
    return -1;
  }

  // One simplex step with entering variable q moving in direction dir.
  // Returns the objective improvement.
  double step(int q, int dir, double dq) {
    const auto sigma = static_cast<double>(dir);
    const double dmag = std::abs(dq);
    // Harris-style two-pass ratio test with per-variable feasibility slack.
    double theta_relaxed = kInfinity;
    const double own_gap = dir > 0 ? ub_[q] - xval_[static_cast<std::size_t>(q)]
                                   : xval_[static_cast<std::size_t>(q)] - lb_[q];
    for (const int p : work_nz_) {
      const double delta = sigma * work_w_[p];
      if (std::abs(delta) <= opts_.pivot_tol) continue;
      const int v = basic_[static_cast<std::size_t>(p)];
      if (delta > 0.0) {
        if (lb_[v] == -kInfinity) continue;
        const double room = xval_[static_cast<std::size_t>(v)] - lb_[v] + ftol_[v];
        theta_relaxed = std::min(theta_relaxed, room / delta);
      } else {
        if (ub_[v] == kInfinity) continue;
        const double room = ub_[v] - xval_[static_cast<std::size_t>(v)] + ftol_[v];
        theta_relaxed = std::min(theta_relaxed, room / (-delta));
      }
    }
    if (own_gap <= theta_relaxed) {
      if (own_gap == kInfinity) throw solver_error("LP is unbounded");
      // Bound flip: q travels to its opposite bound; the basis and all
      // reduced costs stay as they are.
      apply_value_update(own_gap, sigma);
      xval_[static_cast<std::size_t>(q)] = dir > 0 ? ub_[q] : lb_[q];
      objective_estimate_ += dmag * own_gap;
      return dmag * own_gap;
    }
    int leave_pos = -1;
    double leave_ratio = 0.0;
    double best_pivot = 0.0;
    for (const int p : work_nz_) {
      const double delta = sigma * work_w_[p];
      if (std::abs(delta) <= opts_.pivot_tol) continue;
      const int v = basic_[static_cast<std::size_t>(p)];
      double ratio;
      if (delta > 0.0) {
        if (lb_[v] == -kInfinity) continue;
        ratio = (xval_[static_cast<std::size_t>(v)] - lb_[v]) / delta;
      } else {
        if (ub_[v] == kInfinity) continue;
        ratio = (ub_[v] - xval_[static_cast<std::size_t>(v)]) / (-delta);
      }
      if (ratio <= theta_relaxed && std::abs(work_w_[p]) > best_pivot) {
        best_pivot = std::abs(work_w_[p]);
        leave_pos = p;
        leave_ratio = ratio;
      }
    }
    if (leave_pos < 0) throw solver_error("ratio test failed to select a pivot");
    const double theta = std::max(0.0, leave_ratio);
    // The pivot row feeds both the devex weights and the incremental
    // reduced-cost update; it refers to the pre-pivot basis.
    update_duals_and_weights(q, dq, leave_pos);
    apply_value_update(theta, sigma);
    const int leaving = basic_[static_cast<std::size_t>(leave_pos)];
    const double delta_leave = sigma * work_w_[leave_pos];
    xval_[static_cast<std::size_t>(leaving)] = delta_leave > 0.0 ? lb_[leaving] : ub_[leaving];
    xval_[static_cast<std::size_t>(q)] += sigma * theta;
    basic_[static_cast<std::size_t>(leave_pos)] = q;
    state_[static_cast<std::size_t>(q)] = leave_pos;
    state_[static_cast<std::size_t>(leaving)] = -1;
    etas_.push_back({leave_pos, work_w_[leave_pos]});
    for (const int p : work_nz_) {
      if (p != leave_pos) {
        eta_idx_.push_back(p);
        eta_val_.push_back(work_w_[p]);
      }
    }
    eta_start_.push_back(eta_idx_.size());
    eta_nnz_ = eta_idx_.size();
    ++pivots_since_refactor_;
    objective_estimate_ += dmag * theta;
    return dmag * theta;
  }

  // Forrest-Goldfarb devex weight update and incremental reduced costs,
  // both driven by the pivot row of the outgoing basis.
  void update_duals_and_weights(int entering, double dq, int leave_pos) {
    const double alpha_q = work_w_[leave_pos];
    const int leaving = basic_[static_cast<std::size_t>(leave_pos)];
    unit_.setZero(m_);
    unit_[leave_pos] = 1.0;
    for (std::size_t e = etas_.size(); e-- > 0;) {
      double s = unit_[etas_[e].pos];
      for (std::size_t k = eta_start_[e]; k < eta_start_[e + 1]; ++k) {
        s -= eta_val_[k] * unit_[eta_idx_[k]];
      }
      unit_[etas_[e].pos] = s / etas_[e].pivot;
    }
    base_btran(unit_, rho_);
    const double gq = std::max(devex_weight_[static_cast<std::size_t>(entering)], 1.0);
    const double weight_base = gq / (alpha_q * alpha_q);
    const double dual_base = dq / alpha_q;
    double max_weight = 1.0;
    for (int j = 0; j < n_; ++j) {
      if (state_[static_cast<std::size_t>(j)] >= 0 || j == entering) continue;
      double alpha = 0.0;
      for (int s = cptr_[static_cast<std::size_t>(j)];
           s < cptr_[static_cast<std::size_t>(j) + 1]; ++s) {
        alpha += cval_[static_cast<std::size_t>(s)] * rho_[crow_[static_cast<std::size_t>(s)]];
      }
      if (alpha != 0.0) {
        reduced_[static_cast<std::size_t>(j)] -= dual_base * alpha;
        auto& wj = devex_weight_[static_cast<std::size_t>(j)];
        wj = std::max(wj, alpha * alpha * weight_base);
        max_weight = std::max(max_weight, wj);
      }
    }
    for (int r = 0; r < m_; ++r) {
      const int v = n_ + r;
      if (state_[static_cast<std::size_t>(v)] >= 0 || v == entering) continue;
      const double alpha = -rho_[r];
      if (alpha != 0.0) {
        reduced_[static_cast<std::size_t>(v)] -= dual_base * alpha;
        auto& wv = devex_weight_[static_cast<std::size_t>(v)];
        wv = std::max(wv, alpha * alpha * weight_base);
        max_weight = std::max(max_weight, wv);
      }
    }
    reduced_[static_cast<std::size_t>(entering)] = 0.0;
    reduced_[static_cast<std::size_t>(leaving)] = -dual_base;
    devex_weight_[static_cast<std::size_t>(leaving)] = std::max(weight_base, 1.0);
    if (max_weight > 1e8) {
      std::fill(devex_weight_.begin(), devex_weight_.end(), 1.0);  // reference reset
    }
  }

  // Moves every basic variable along -sigma * w by step theta. The
  // entering variable's own value is handled by the caller.
  void apply_value_update(double theta, double sigma) {
    if (theta == 0.0) return;
    for (const int p : work_nz_) {
      xval_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(p)])] -=
          sigma * theta * work_w_[p];
    }
  }

  // Recomputes basic values from the nonbasic ones on a fresh
  // factorization: B x_B = -N x_N.
  void recompute_basics() {
    rhs_.setZero(m_);
    for (int j = 0; j < n_; ++j) {
      if (state_[static_cast<std::size_t>(j)] >= 0) continue;
      const double xj = xval_[static_cast<std::size_t>(j)];
      if (xj == 0.0) continue;
      for (int s = cptr_[static_cast<std::size_t>(j)];
           s < cptr_[static_cast<std::size_t>(j) + 1]; ++s) {
        rhs_[crow_[static_cast<std::size_t>(s)]] -= cval_[static_cast<std::size_t>(s)] * xj;
      }
    }
    for (int r = 0; r < m_; ++r) {
      const int v = n_ + r;
      if (state_[static_cast<std::size_t>(v)] < 0) rhs_[r] += xval_[static_cast<std::size_t>(v)];
    }
    base_ftran(rhs_, work_w_);
    for (int p = 0; p < m_; ++p) {
      xval_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(p)])] = work_w_[p];
    }
    objective_estimate_ = 0.0;
    for (int j = 0; j < n_; ++j) {
      objective_estimate_ +=
          cost_[static_cast<std::size_t>(j)] * xval_[static_cast<std::size_t>(j)];
    }
  }

  void finalize(SimplexResult& result) {
    refactorize();
    recompute_basics();
    price();
    result.x.resize(n_);
    for (int j = 0; j < n_; ++j) result.x[j] = xval_[static_cast<std::size_t>(j)];
    result.objective = lp_.objective.dot(result.x);
    result.primal_residual = lp_.max_violation(result.x);
    double gap = 0.0;
    for (int v = 0; v < total_; ++v) {
      if (state_[static_cast<std::size_t>(v)] >= 0) continue;
      const double d = reduced_[static_cast<std::size_t>(v)];
      if (d > 0.0 && ub_[v] < kInfinity) {
        gap += d * (ub_[v] - xval_[static_cast<std::size_t>(v)]);
      } else if (d < 0.0 && lb_[v] > -kInfinity) {
        gap += -d * (xval_[static_cast<std::size_t>(v)] - lb_[v]);
      }
    }
    result.dual_gap = gap / (1.0 + std::abs(result.objective));
  }

  const SparseLp& lp_;
  SimplexOptions opts_;
  int n_ = 0, m_ = 0, total_ = 0;
  long max_iter_ = 0;
  long stall_limit_ = 0;

  // scaled problem
  std::vector<double> row_scale_;
  std::vector<int> cptr_, crow_;
  std::vector<double> cval_;
  std::vector<double> lb_, ub_, ftol_, cost_;

  // simplex state
  std::vector<double> xval_;
  std::vector<int> state_;  // var -> basis position or -1
  std::vector<int> basic_;  // position -> var
  bool dirty_ = false;
  double objective_estimate_ = 0.0;

  // factorization
  Eigen::SparseLU<Eigen::SparseMatrix<double>> kernel_lu_;
  std::vector<int> frozen_basic_;
  std::vector<int> kernel_row_of_;
  std::vector<int> kernel_rows_;
  std::vector<int> struct_positions_;
  std::vector<Eta> etas_;
  std::vector<int> eta_idx_;
  std::vector<double> eta_val_;
  std::vector<std::size_t> eta_start_{0};
  std::size_t eta_nnz_ = 0;
  std::size_t eta_budget_ = 0;
  int pivots_since_refactor_ = 0;

  // workspaces
  Eigen::VectorXd work_w_, rhs_, acc_, tvec_, yrow_, unit_, rho_;
  std::vector<int> work_nz_;
  std::vector<double> reduced_;
  std::vector<double> devex_weight_;
};

}  // namespace

SimplexResult solve_bounded_lp(const SparseLp& lp, const SimplexOptions& opts) {
  if (lp.num_cols < 1) throw config_error("LP has no variables");
  const SparseLp merged = merge_opposed_pairs(lp);
  BoundedSimplex solver(merged, opts);
  SimplexResult result = solver.run();
  result.primal_residual = lp.max_violation(result.x);
  return result;
}

}  // namespace steinbench

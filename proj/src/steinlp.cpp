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

#include "steinbench/steinlp.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "steinbench/errors.hpp"
#include "steinbench/log.hpp"

namespace steinbench {
namespace {

void check_scales(const Scales& scales) {
  if (scales.c1 <= 0.0 || scales.c2 <= 0.0 || scales.c3 <= 0.0) {
    throw config_error("Stein set scales must be positive");
  }
}

// Both one-sided rows of |expr| <= bound.
void add_abs_row(SparseLp& lp, std::vector<int>& cols, std::vector<double>& vals,
                 double bound) {
  lp.add_row(cols, vals, -kInfinity, bound);
  for (auto& v : vals) v = -v;
  lp.add_row(cols, vals, -kInfinity, bound);
}

}  // namespace

CoordinateLp build_coordinate_lp(int coord, const WeightedSample& sample,
                                 const OperatorData& op, const SpannerGraph& graph,
                                 const Scales& scales) {
  check_scales(scales);
  const int n = static_cast<int>(sample.size());
  const int d = static_cast<int>(sample.dim());
  if (coord < 0 || coord >= d) throw config_error("coordinate index out of range");
  if (op.b_vals.rows() != n || op.b_vals.cols() != d) {
    throw config_error("operator data does not match sample");
  }
  if (graph.n != n) throw config_error("spanner graph does not match sample");

  CoordinateLp out;
  out.coord = coord;
  out.n = n;
  out.d = d;
  out.scales = scales;
  out.lp = SparseLp(n * (d + 1));

  const Eigen::VectorXd& q = sample.weights();
  for (int i = 0; i < n; ++i) {
    out.lp.objective[out.psi_col(i)] = 2.0 * q[i] * op.b_vals(i, coord);
    out.lp.col_lb[out.psi_col(i)] = -scales.c1;
    out.lp.col_ub[out.psi_col(i)] = scales.c1;
    for (int k = 0; k < d; ++k) {
      const int col = out.grad_col(k, i);
      out.lp.objective[col] = q[i] * op.m_vals[static_cast<std::size_t>(i)](coord, k);
      out.lp.col_lb[col] = -scales.c2;
      out.lp.col_ub[col] = scales.c2;
    }
  }

  std::vector<int> cols;
  std::vector<double> vals;
  for (const auto& e : graph.edges) {
    const Eigen::VectorXd dx = sample.points().row(e.i) - sample.points().row(e.l);
    // |psi_i - psi_l| <= c2 w
    cols = {out.psi_col(e.i), out.psi_col(e.l)};
    vals = {1.0, -1.0};
    add_abs_row(out.lp, cols, vals, scales.c2 * e.w);
    // |Psi_ki - Psi_kl| <= c3 w for every k
    for (int k = 0; k < d; ++k) {
      cols = {out.grad_col(k, e.i), out.grad_col(k, e.l)};
      vals = {1.0, -1.0};
      add_abs_row(out.lp, cols, vals, scales.c3 * e.w);
    }
    // Taylor remainders anchored at each endpoint:
    // |psi_i - psi_l - <Psi e_anchor, x_i - x_l>| <= c3 w^2 / 2
    const double taylor_bound = 0.5 * scales.c3 * e.w * e.w;
    for (const int anchor : {e.i, e.l}) {
      cols = {out.psi_col(e.i), out.psi_col(e.l)};
      vals = {1.0, -1.0};
      for (int k = 0; k < d; ++k) {
        if (dx[k] != 0.0) {
          cols.push_back(out.grad_col(k, anchor));
          vals.push_back(-dx[k]);
        }
      }
      add_abs_row(out.lp, cols, vals, taylor_bound);
    }
  }
  return out;
}

namespace {

CoordinateSolution extract_solution(const CoordinateLp& lp, const SimplexResult& res) {
  CoordinateSolution sol;
  sol.status = res.status;
  sol.iterations = res.iterations;
  sol.primal_residual = res.primal_residual;
  sol.dual_gap = res.dual_gap;
  sol.psi.resize(lp.n);
  sol.grad_psi.resize(lp.d, lp.n);
  for (int i = 0; i < lp.n; ++i) {
    sol.psi[i] = res.x[lp.psi_col(i)];
    for (int k = 0; k < lp.d; ++k) sol.grad_psi(k, i) = res.x[lp.grad_col(k, i)];
  }
  sol.tau = lp.lp.objective.dot(res.x);
  return sol;
}

}  // namespace

CoordinateSolution solve_lp(const CoordinateLp& lp, const LpBackend* backend) {
  const BuiltinSimplex fallback;
  const LpBackend& solver = backend != nullptr ? *backend : static_cast<const LpBackend&>(fallback);
  const SimplexResult res = solver.solve(lp.lp);
  if (res.status != SolveStatus::optimal) {
    throw solver_error("coordinate LP " + std::to_string(lp.coord) +
                       " hit the iteration limit after " + std::to_string(res.iterations) +
                       " iterations");
  }
  return extract_solution(lp, res);
}

SteinWitness spanner_stein_discrepancy(const WeightedSample& sample, const TargetModel& target,
                                       const DiffusionSpec& spec, const SteinOptions& opts) {
  check_scales(opts.scales);
  if (opts.stretch < 1.0) throw config_error("spanner stretch must be >= 1");
  const int n = static_cast<int>(sample.size());
  const int d = static_cast<int>(sample.dim());
  if (target.dim != d || spec.dim != d) {
    throw config_error("sample, target and diffusion dimensions disagree");
  }

  // Coefficient sanity at the points the LP will use, plus the origin.
  std::vector<Eigen::VectorXd> probes;
  probes.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) probes.push_back(sample.point(i));
  probes.push_back(Eigen::VectorXd::Zero(d));
  const auto diffusion_report = validate_diffusion(spec, probes);
  if (!diffusion_report.pass) {
    throw config_error("diffusion coefficients fail the PSD/skew checks at sample points");
  }

  SpannerGraph built;
  const SpannerGraph* graph = opts.graph;
  if (graph == nullptr) {
    built = d == 1 ? build_sorted_1d_spanner(sample) : build_greedy_spanner(sample, opts.stretch);
    graph = &built;
  }
  const OperatorData op = drift_general(spec, target, sample.points());

  std::vector<CoordinateSolution> solutions(static_cast<std::size_t>(d));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(d));
  const BuiltinSimplex builtin(opts.simplex);
  const LpBackend* backend = opts.backend != nullptr ? opts.backend : &builtin;
  // In-flight solves capped at the core count; oversubscribing the LP
  // solves only thrashes the cache.
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = std::max(1, std::min(std::min(opts.threads, d), hw));

  auto solve_coord = [&](int j) {
    try {
      const CoordinateLp lp = build_coordinate_lp(j, sample, op, *graph, opts.scales);
      solutions[static_cast<std::size_t>(j)] = solve_lp(lp, backend);
      log_info("coordinate %d: tau=%.12g iters=%ld", j,
               solutions[static_cast<std::size_t>(j)].tau,
               solutions[static_cast<std::size_t>(j)].iterations);
    } catch (...) {
      errors[static_cast<std::size_t>(j)] = std::current_exception();
    }
  };

  if (workers == 1) {
    for (int j = 0; j < d; ++j) solve_coord(j);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int j = next.fetch_add(1); j < d; j = next.fetch_add(1)) solve_coord(j);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (int j = 0; j < d; ++j) {
    if (errors[static_cast<std::size_t>(j)]) std::rethrow_exception(errors[static_cast<std::size_t>(j)]);
  }

  SteinWitness witness;
  witness.coord_values.resize(d);
  witness.psi.resize(d, n);
  witness.grad.assign(static_cast<std::size_t>(d), Eigen::MatrixXd::Zero(d, n));
  for (int j = 0; j < d; ++j) {
    const auto& sol = solutions[static_cast<std::size_t>(j)];
    witness.coord_values[j] = sol.tau;
    witness.psi.row(j) = sol.psi.transpose();
    witness.grad[static_cast<std::size_t>(j)] = sol.grad_psi;
  }
  witness.value = witness.coord_values.sum();

  Eigen::MatrixXd g_vals = witness.psi.transpose();
  std::vector<Eigen::MatrixXd> grad_vals(static_cast<std::size_t>(n),
                                         Eigen::MatrixXd::Zero(d, d));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      grad_vals[static_cast<std::size_t>(i)].row(j) =
          witness.grad[static_cast<std::size_t>(j)].col(i).transpose();
    }
  }
  witness.h_star = apply_operator(op, g_vals, grad_vals);
  return witness;
}

EquivalenceReport nonuniform_equivalence_check(const WeightedSample& sample,
                                               const TargetModel& target,
                                               const DiffusionSpec& spec, const Scales& scales,
                                               const SteinOptions& opts) {
  check_scales(scales);
  SpannerGraph built;
  SteinOptions shared = opts;
  if (shared.graph == nullptr) {
    built = sample.dim() == 1 ? build_sorted_1d_spanner(sample)
                              : build_greedy_spanner(sample, opts.stretch);
    shared.graph = &built;
  }
  shared.scales = Scales{};
  const double s_uniform = spanner_stein_discrepancy(sample, target, spec, shared).value;
  shared.scales = scales;
  const double s_scaled = spanner_stein_discrepancy(sample, target, spec, shared).value;
  EquivalenceReport report;
  report.s_uniform = s_uniform;
  report.s_scaled = s_scaled;
  report.lower = scales.min() * s_uniform - 1e-6;
  report.upper = scales.max() * s_uniform + 1e-6;
  report.pass = report.lower <= s_scaled && s_scaled <= report.upper;
  return report;
}

WitnessCheck check_witness(const SteinWitness& witness, const WeightedSample& sample,
                           const OperatorData& op, const SpannerGraph& graph,
                           const Scales& scales) {
  const int n = static_cast<int>(sample.size());
  const int d = static_cast<int>(sample.dim());
  WitnessCheck check;
  auto track = [&](double expr, double bound) {
    check.max_constraint_residual =
        std::max(check.max_constraint_residual, std::abs(expr) - bound);
  };
  for (int j = 0; j < d; ++j) {
    const auto& grad_j = witness.grad[static_cast<std::size_t>(j)];
    for (int i = 0; i < n; ++i) {
      track(witness.psi(j, i), scales.c1);
      for (int k = 0; k < d; ++k) track(grad_j(k, i), scales.c2);
    }
    for (const auto& e : graph.edges) {
      const Eigen::VectorXd dx = sample.points().row(e.i) - sample.points().row(e.l);
      const double dpsi = witness.psi(j, e.i) - witness.psi(j, e.l);
      track(dpsi, scales.c2 * e.w);
      for (int k = 0; k < d; ++k) track(grad_j(k, e.i) - grad_j(k, e.l), scales.c3 * e.w);
      const double bound = 0.5 * scales.c3 * e.w * e.w;
      track(dpsi - grad_j.col(e.i).dot(dx), bound);
      track(dpsi - grad_j.col(e.l).dot(dx), bound);
    }
    // Objective recomputation, independent of the solver's bookkeeping.
    double tau = 0.0;
    for (int i = 0; i < n; ++i) {
      tau += sample.weights()[i] * 2.0 * op.b_vals(i, j) * witness.psi(j, i);
      for (int k = 0; k < d; ++k) {
        tau += sample.weights()[i] * op.m_vals[static_cast<std::size_t>(i)](j, k) * grad_j(k, i);
      }
    }
    check.max_objective_deviation =
        std::max(check.max_objective_deviation, std::abs(tau - witness.coord_values[j]));
  }
  check.weighted_h_deviation =
      std::abs(sample.weights().dot(witness.h_star) - witness.value);
  check.max_constraint_residual = std::max(check.max_constraint_residual, 0.0);
  return check;
}

std::string witness_to_json(const SteinWitness& witness) {
  nlohmann::ordered_json j;
  j["value"] = witness.value;
  j["coord_values"] = std::vector<double>(witness.coord_values.begin(), witness.coord_values.end());
  const int d = static_cast<int>(witness.psi.rows());
  const int n = static_cast<int>(witness.psi.cols());
  auto psi = nlohmann::ordered_json::array();
  for (int jj = 0; jj < d; ++jj) {
    auto row = nlohmann::ordered_json::array();
    for (int i = 0; i < n; ++i) row.push_back(witness.psi(jj, i));
    psi.push_back(std::move(row));
  }
  j["psi"] = std::move(psi);
  auto grad = nlohmann::ordered_json::array();
  for (int jj = 0; jj < d; ++jj) {
    auto mat = nlohmann::ordered_json::array();
    for (int k = 0; k < d; ++k) {
      auto row = nlohmann::ordered_json::array();
      for (int i = 0; i < n; ++i) row.push_back(witness.grad[static_cast<std::size_t>(jj)](k, i));
      mat.push_back(std::move(row));
    }
    grad.push_back(std::move(mat));
  }
  j["Psi"] = std::move(grad);
  j["h_star"] = std::vector<double>(witness.h_star.begin(), witness.h_star.end());
  return j.dump();
}

void save_witness(const std::string& path, const SteinWitness& witness) {
  std::ofstream out(path);
  if (!out) throw ingest_error("cannot open file for writing: " + path);
  out << witness_to_json(witness) << '\n';
}

void dump_lp(const std::string& path, const CoordinateLp& lp) {
  std::ofstream out(path);
  if (!out) throw ingest_error("cannot open file for writing: " + path);
  out << "# steinbench coordinate LP, maximize c.x\n";
  out << "# c <col> <objective> <lb> <ub>\n";
  out << "# r <row> <lb> <ub>\n";
  out << "# t <row> <col> <coeff>\n";
  out << "p " << lp.coord << ' ' << lp.n << ' ' << lp.d << ' ' << lp.lp.num_rows() << '\n';
  out.precision(17);
  for (int col = 0; col < lp.lp.num_cols; ++col) {
    out << "c " << col << ' ' << lp.lp.objective[col] << ' ' << lp.lp.col_lb[col] << ' '
        << lp.lp.col_ub[col] << '\n';
  }
  for (int r = 0; r < lp.lp.num_rows(); ++r) {
    out << "r " << r << ' ' << lp.lp.row_lb[r] << ' ' << lp.lp.row_ub[r] << '\n';
    for (int k = lp.lp.row_start[r]; k < lp.lp.row_start[r + 1]; ++k) {
      out << "t " << r << ' ' << lp.lp.col_index[k] << ' ' << lp.lp.coeff[k] << '\n';
    }
  }
}

}  // namespace steinbench

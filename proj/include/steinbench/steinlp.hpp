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

#include <string>
#include <vector>

#include "steinbench/operators.hpp"
#include "steinbench/sample.hpp"
#include "steinbench/simplex.hpp"
#include "steinbench/spanner.hpp"

namespace steinbench {

/// Bound scales (c1, c2, c3) of the non-uniform Stein set; (1,1,1) is the
/// classical set.
struct Scales {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  double min() const { return std::min(c1, std::min(c2, c3)); }
  double max() const { return std::max(c1, std::max(c2, c3)); }
};

/// The j-th coordinate linear program over a spanner graph. Variables are
/// psi_j in R^n followed by Psi_j in R^{d x n} grouped by gradient
/// coordinate k; per edge there are 2 + 2d + 4 one-sided inequality rows
/// (both signs of the psi-Lipschitz, Psi-Lipschitz, and two Taylor
/// remainder constraints).
struct CoordinateLp {
  int coord = 0;
  int n = 0;
  int d = 0;
  Scales scales;
  SparseLp lp;

  int psi_col(int i) const { return i; }
  int grad_col(int k, int i) const { return n + k * n + i; }
};

CoordinateLp build_coordinate_lp(int coord, const WeightedSample& sample,
                                 const OperatorData& op, const SpannerGraph& graph,
                                 const Scales& scales = {});

struct CoordinateSolution {
  double tau = 0.0;              // optimal objective, recomputed from the witness
  Eigen::VectorXd psi;           // n
  Eigen::MatrixXd grad_psi;      // d x n, (k, i) = grad_k g_j(x_i)
  SolveStatus status = SolveStatus::optimal;
  long iterations = 0;
  double primal_residual = 0.0;
  double dual_gap = 0.0;
};

/// Solves one coordinate LP. Throws solver_error when the iteration limit
/// is hit (the LP itself is always feasible and bounded).
CoordinateSolution solve_lp(const CoordinateLp& lp, const LpBackend* backend = nullptr);

/// Optimal Stein function values: the discrepancy, its per-coordinate
/// split, the witness (psi, Psi) and the induced test function
/// h*(x_i) = (T g*)(x_i).
struct SteinWitness {
  double value = 0.0;
  Eigen::VectorXd coord_values;          // d
  Eigen::MatrixXd psi;                   // d x n, (j, i) = g_j(x_i)
  std::vector<Eigen::MatrixXd> grad;     // d matrices d x n: grad[j](k, i)
  Eigen::VectorXd h_star;                // n
};

struct SteinOptions {
  double stretch = 2.0;
  Scales scales;
  int threads = 1;
  SimplexOptions simplex;
  const LpBackend* backend = nullptr;   // built-in simplex when null
  const SpannerGraph* graph = nullptr;  // externally supplied spanner
};

/// Spanner diffusion Stein discrepancy: builds the spanner (sorted
/// adjacency when d = 1, greedy otherwise), assembles the operator
/// coefficients, solves the d coordinate LPs (in parallel across
/// coordinates) and returns the witness.
SteinWitness spanner_stein_discrepancy(const WeightedSample& sample,
                                       const TargetModel& target, const DiffusionSpec& spec,
                                       const SteinOptions& opts = {});

struct EquivalenceReport {
  double s_uniform = 0.0;
  double s_scaled = 0.0;
  double lower = 0.0;  // min(c) * s_uniform - 1e-6
  double upper = 0.0;  // max(c) * s_uniform + 1e-6
  bool pass = false;
};

/// Checks the non-uniform Stein set bracket
/// min(c) S <= S^c <= max(c) S on a shared spanner.
EquivalenceReport nonuniform_equivalence_check(const WeightedSample& sample,
                                               const TargetModel& target,
                                               const DiffusionSpec& spec,
                                               const Scales& scales,
                                               const SteinOptions& opts = {});

struct WitnessCheck {
  double max_constraint_residual = 0.0;  // against the edge/box families
  double max_objective_deviation = 0.0;  // recomputed tau_j vs coord_values
  double weighted_h_deviation = 0.0;     // |sum_i q_i h*_i - value|
};

/// Re-derives every Stein-set constraint from the graph and operator data
/// (independently of the LP solver) and evaluates the witness against
/// them.
WitnessCheck check_witness(const SteinWitness& witness, const WeightedSample& sample,
                           const OperatorData& op, const SpannerGraph& graph,
                           const Scales& scales = {});

/// Witness JSON: {value, coord_values[], psi[][], Psi[][][], h_star[]}.
std::string witness_to_json(const SteinWitness& witness);
void save_witness(const std::string& path, const SteinWitness& witness);

/// Sparse triplet dump of one coordinate LP for cross-checking against
/// external solvers. Format: "c <col> <objective> <lb> <ub>" per column,
/// "r <row> <lb> <ub>" per row, "t <row> <col> <coeff>" per nonzero.
void dump_lp(const std::string& path, const CoordinateLp& lp);

}  // namespace steinbench

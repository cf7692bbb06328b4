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

#include <optional>
#include <string>

#include "steinbench/diffusion.hpp"
#include "steinbench/samplers.hpp"
#include "steinbench/target.hpp"

namespace steinbench {

struct Problem {
  TargetModel target;
  DiffusionSpec spec;
};

/// Parses a target JSON config. Kinds: "gmm" (weights, means, cov),
/// "logistic" / "huber" (data CSV path, prior_mean, prior_cov, huber "c"),
/// "studentt_pseudohuber" (data CSV path, nu, delta, optional noise_cov).
/// Dataset CSV paths are resolved relative to the config file.
TargetModel load_target(const std::string& path);
TargetModel target_from_json_string(const std::string& json, const std::string& base_dir = ".");

/// Parses a diffusion JSON config against an already-loaded target.
/// Kinds: "langevin", "preconditioned" (a), "nonreversible" (a, c),
/// "riemannian_pseudo_huber" (delta), "second_order" (replaces the target
/// with its joint extension on R^{2d}).
DiffusionSpec load_diffusion(const std::string& path, TargetModel& target);
DiffusionSpec diffusion_from_json_string(const std::string& json, TargetModel& target);

Problem load_problem(const std::string& target_path, const std::string& diffusion_path);

/// Chain config JSON for the `sample` subcommand. Kinds: "mala", "sgrld"
/// (with "metric": {"kind": "pseudo_huber", "delta": ...} or
/// {"kind": "identity"}), and "iid" (targets with an exact sampler; field
/// "n").
struct ChainSpec {
  std::string kind;
  ChainConfig cfg;
  long iid_n = 0;
  std::optional<RiemannianMetric> metric;
};

ChainSpec load_chain(const std::string& path, const TargetModel& target);
ChainSpec chain_from_json_string(const std::string& json, const TargetModel& target);

/// Runs the configured sampler (seed already set on cfg).
ChainResult run_chain(const TargetModel& target, const ChainSpec& chain);

}  // namespace steinbench

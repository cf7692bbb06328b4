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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "steinbench/config.hpp"
#include "steinbench/errors.hpp"
#include "steinbench/log.hpp"
#include "steinbench/metrics.hpp"
#include "steinbench/sample.hpp"
#include "steinbench/spanner.hpp"
#include "steinbench/steinlp.hpp"

namespace sb = steinbench;

namespace {

struct CommonArgs {
  std::string sample_path;
  std::string target_path;
  std::string diffusion_path;
  double stretch = 2.0;
  std::vector<double> scales{1.0, 1.0, 1.0};
  std::string out_path;
  std::uint64_t seed = 0;
  int threads = 1;
  bool weight_column = false;
};

sb::Scales parse_scales(const std::vector<double>& scales) {
  if (scales.size() != 3) throw sb::config_error("--scales needs exactly three values");
  return {scales[0], scales[1], scales[2]};
}

sb::WeightedSample read_sample(const CommonArgs& args) {
  return sb::load_sample(args.sample_path,
                         args.weight_column ? sb::WeightMode::column : sb::WeightMode::uniform);
}

int cmd_discrepancy(const CommonArgs& args, const std::string& spanner_path, bool as_json,
                    const std::string& dump_prefix) {
  const sb::WeightedSample sample = read_sample(args);
  sb::Problem problem = sb::load_problem(args.target_path, args.diffusion_path);
  sb::SteinOptions opts;
  opts.stretch = args.stretch;
  opts.scales = parse_scales(args.scales);
  opts.threads = args.threads;
  sb::SpannerGraph external;
  if (!spanner_path.empty()) {
    external = sb::load_edges(spanner_path, sample, args.stretch);
    opts.graph = &external;
  }
  if (!dump_prefix.empty()) {
    const sb::OperatorData op = sb::drift_general(problem.spec, problem.target, sample.points());
    const sb::SpannerGraph graph =
        !spanner_path.empty()
            ? external
            : (sample.dim() == 1 ? sb::build_sorted_1d_spanner(sample)
                                 : sb::build_greedy_spanner(sample, args.stretch));
    for (int j = 0; j < sample.dim(); ++j) {
      sb::dump_lp(dump_prefix + "." + std::to_string(j) + ".lp",
                  sb::build_coordinate_lp(j, sample, op, graph, opts.scales));
    }
  }
  const sb::SteinWitness witness =
      sb::spanner_stein_discrepancy(sample, problem.target, problem.spec, opts);
  if (!args.out_path.empty()) sb::save_witness(args.out_path, witness);
  if (as_json) {
    std::printf("{\"value\":%.17g,\"coord_values\":[", witness.value);
    for (int j = 0; j < witness.coord_values.size(); ++j) {
      std::printf("%s%.17g", j > 0 ? "," : "", witness.coord_values[j]);
    }
    std::printf("]}\n");
  } else {
    std::printf("%.17g\n", witness.value);
  }
  return 0;
}

int cmd_spanner(const CommonArgs& args, const std::string& edges_path) {
  const sb::WeightedSample sample = read_sample(args);
  sb::SpannerGraph graph;
  if (!edges_path.empty()) {
    graph = sb::load_edges(edges_path, sample, args.stretch);
  } else {
    graph = sample.dim() == 1 ? sb::build_sorted_1d_spanner(sample)
                              : sb::build_greedy_spanner(sample, args.stretch);
  }
  const sb::SpannerCheck check = sb::verify_spanner(graph, sample, args.stretch);
  if (!check.ok) {
    std::fprintf(stderr, "spanner violation: pair (%d, %d) path %.17g > %.17g\n", check.i,
                 check.l, check.graph_distance, check.required);
    return 1;
  }
  if (!args.out_path.empty()) sb::save_edges(args.out_path, graph);
  std::printf("%zu\n", graph.edges.size());
  return 0;
}

int cmd_sample(const CommonArgs& args, const std::string& chain_path) {
  sb::TargetModel target = sb::load_target(args.target_path);
  if (!args.diffusion_path.empty()) {
    sb::load_diffusion(args.diffusion_path, target);  // may lift to the joint space
  }
  sb::ChainSpec chain = sb::load_chain(chain_path, target);
  chain.cfg.seed = args.seed;
  if (chain.cfg.init.size() == 0) chain.cfg.init = Eigen::VectorXd::Zero(target.dim);
  const sb::ChainResult result = sb::run_chain(target, chain);
  if (args.out_path.empty()) throw sb::config_error("sample requires --out");
  sb::save_sample(args.out_path, result.sample, sb::WeightMode::column);
  std::ofstream meta(args.out_path + ".meta.json");
  meta << "{\"kind\":\"" << chain.kind << "\",\"accept_rate\":" << result.stats.accept_rate
       << ",\"kept\":" << result.stats.kept << ",\"epsilon\":" << chain.cfg.epsilon
       << ",\"seed\":" << args.seed << "}\n";
  std::printf("%ld\n", result.stats.kept);
  return 0;
}

int cmd_compare(const CommonArgs& args, std::vector<long> sizes, const std::string& ref_path) {
  const sb::WeightedSample sample = read_sample(args);
  sb::Problem problem = sb::load_problem(args.target_path, args.diffusion_path);
  std::optional<sb::WeightedSample> ref;
  if (!ref_path.empty()) ref = sb::load_sample(ref_path, sb::WeightMode::uniform);
  if (sizes.empty()) sizes = {50, 100, 200, 400, 800, 1600};
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!args.out_path.empty()) {
    file.open(args.out_path);
    if (!file) throw sb::ingest_error("cannot open output file: " + args.out_path);
    out = &file;
  }
  sb::SteinOptions opts;
  opts.stretch = args.stretch;
  opts.scales = parse_scales(args.scales);
  opts.threads = args.threads;
  *out << "n,S,W1,bound\n";
  std::vector<std::pair<long, double>> trend;
  for (const long n : sizes) {
    if (n < 1 || n > sample.size()) continue;
    const sb::WeightedSample prefix = sample.prefix(n);
    const double value =
        sb::spanner_stein_discrepancy(prefix, problem.target, problem.spec, opts).value;
    trend.emplace_back(n, value);
    *out << n << ',' << value << ',';
    if (ref && sample.dim() == 1) *out << sb::wasserstein_1d(prefix, *ref);
    *out << ',';
    if (ref && sample.dim() == 1) {
      *out << sb::coupled_upper_bound(prefix, *ref, problem.target, problem.spec);
    }
    *out << '\n';
  }
  if (trend.size() >= 3) {
    *out << "# slope," << sb::fit_rate(trend).slope << '\n';
  }
  return 0;
}

int cmd_witness(const CommonArgs& args) {
  const sb::WeightedSample sample = read_sample(args);
  sb::Problem problem = sb::load_problem(args.target_path, args.diffusion_path);
  sb::SteinOptions opts;
  opts.stretch = args.stretch;
  opts.scales = parse_scales(args.scales);
  opts.threads = args.threads;
  const sb::SteinWitness witness =
      sb::spanner_stein_discrepancy(sample, problem.target, problem.spec, opts);
  if (args.out_path.empty()) throw sb::config_error("witness requires --out");
  std::ofstream out(args.out_path);
  if (!out) throw sb::ingest_error("cannot open output file: " + args.out_path);
  out.precision(17);
  out << "# x_1..x_d,h_star\n";
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    for (Eigen::Index k = 0; k < sample.dim(); ++k) out << sample.points()(i, k) << ',';
    out << witness.h_star[i] << '\n';
  }
  std::printf("%.17g\n", witness.value);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spanner diffusion Stein discrepancies for weighted samples"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string spanner_path, edges_path, chain_path, ref_path, dump_prefix;
  std::vector<long> sizes;
  bool as_json = false;

  auto add_common = [&](CLI::App* cmd, bool needs_target) {
    cmd->add_option("--sample", args.sample_path, "sample CSV")->required();
    if (needs_target) {
      cmd->add_option("--target", args.target_path, "target JSON")->required();
      cmd->add_option("--diffusion", args.diffusion_path, "diffusion JSON")->required();
    }
    cmd->add_option("--stretch", args.stretch, "spanner stretch t >= 1");
    cmd->add_option("--scales", args.scales, "Stein set scales c1,c2,c3")->delimiter(',');
    cmd->add_option("--out", args.out_path, "output path");
    cmd->add_option("--seed", args.seed, "random seed");
    cmd->add_option("--threads", args.threads, "worker threads");
    cmd->add_flag("--weights", args.weight_column, "sample CSV has a trailing weight column");
  };

  CLI::App* discrepancy = app.add_subcommand("discrepancy", "compute the Stein discrepancy");
  add_common(discrepancy, true);
  discrepancy->add_option("--spanner", spanner_path, "externally built edge CSV");
  discrepancy->add_flag("--json", as_json, "print a JSON summary instead of a bare value");
  discrepancy->add_option("--dump-lp", dump_prefix, "write per-coordinate LP triplet dumps");

  CLI::App* spanner = app.add_subcommand("spanner", "build or verify a spanner");
  add_common(spanner, false);
  spanner->add_option("--edges", edges_path, "verify this edge CSV instead of building");

  CLI::App* sample_cmd = app.add_subcommand("sample", "run a configured sampler");
  sample_cmd->add_option("--target", args.target_path, "target JSON")->required();
  sample_cmd->add_option("--diffusion", args.diffusion_path, "optional diffusion JSON");
  sample_cmd->add_option("--chain", chain_path, "chain config JSON")->required();
  sample_cmd->add_option("--out", args.out_path, "output sample CSV")->required();
  sample_cmd->add_option("--seed", args.seed, "random seed");

  CLI::App* compare = app.add_subcommand("compare", "prefix sweep of S (and W1, bound)");
  add_common(compare, true);
  compare->add_option("--sizes", sizes, "prefix sizes")->delimiter(',');
  compare->add_option("--ref", ref_path, "reference sample CSV for W1 and the bound");

  CLI::App* witness = app.add_subcommand("witness", "export h* = T g* for plotting");
  add_common(witness, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (discrepancy->parsed()) return cmd_discrepancy(args, spanner_path, as_json, dump_prefix);
    if (spanner->parsed()) return cmd_spanner(args, edges_path);
    if (sample_cmd->parsed()) return cmd_sample(args, chain_path);
    if (compare->parsed()) return cmd_compare(args, sizes, ref_path);
    if (witness->parsed()) return cmd_witness(args);
  } catch (const sb::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const sb::ingest_error& e) {
    std::fprintf(stderr, "ingestion error: %s\n", e.what());
    return 2;
  } catch (const sb::solver_error& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

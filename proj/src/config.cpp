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

#include "steinbench/config.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "steinbench/errors.hpp"
#include "steinbench/sample.hpp"
#include "steinbench/targets.hpp"

namespace steinbench {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw config_error("invalid JSON in " + path + ": " + e.what());
  }
}

json parse_string(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(std::string("invalid JSON: ") + e.what());
  }
}

Eigen::VectorXd to_vector(const json& j, const char* field) {
  if (!j.is_array()) throw config_error(std::string(field) + " must be an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw config_error(std::string(field) + " must be numeric");
    v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  }
  return v;
}

Eigen::MatrixXd to_matrix(const json& j, const char* field) {
  if (!j.is_array() || j.empty()) throw config_error(std::string(field) + " must be a 2-D array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw config_error(std::string(field) + " must be a 2-D array");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw config_error(std::string(field) + " rows must have equal length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

const json& require(const json& j, const char* field) {
  if (!j.contains(field)) throw config_error(std::string("missing config field: ") + field);
  return j.at(field);
}

// Dataset CSV with covariate columns followed by a response column.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> load_dataset(const json& j,
                                                         const fs::path& base_dir) {
  const std::string rel = require(j, "data").get<std::string>();
  fs::path path(rel);
  if (path.is_relative()) path = base_dir / path;
  const Eigen::MatrixXd raw = load_matrix_csv(path.string());
  if (raw.cols() < 2) throw config_error("dataset needs covariate columns plus a response");
  return {raw.leftCols(raw.cols() - 1), raw.col(raw.cols() - 1)};
}

TargetModel target_from_json(const json& j, const fs::path& base_dir) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "gmm") {
    GaussianMixtureParams params;
    params.weights = to_vector(require(j, "weights"), "weights");
    const auto& means = require(j, "means");
    if (!means.is_array()) throw config_error("means must be an array of points");
    for (const auto& mu : means) params.means.push_back(to_vector(mu, "means"));
    params.cov = to_matrix(require(j, "cov"), "cov");
    return make_gmm_target(std::move(params));
  }
  if (kind == "logistic") {
    LogisticRegressionParams params;
    auto [v, y] = load_dataset(j, base_dir);
    params.covariates = std::move(v);
    params.labels = std::move(y);
    params.prior_mean = to_vector(require(j, "prior_mean"), "prior_mean");
    params.prior_cov = to_matrix(require(j, "prior_cov"), "prior_cov");
    return make_logistic_target(std::move(params));
  }
  if (kind == "huber") {
    HuberRegressionParams params;
    auto [v, y] = load_dataset(j, base_dir);
    params.covariates = std::move(v);
    params.responses = std::move(y);
    params.prior_mean = to_vector(require(j, "prior_mean"), "prior_mean");
    params.prior_cov = to_matrix(require(j, "prior_cov"), "prior_cov");
    params.threshold = require(j, "c").get<double>();
    return make_huber_target(std::move(params));
  }
  if (kind == "studentt_pseudohuber") {
    StudentTRegressionParams params;
    auto [v, y] = load_dataset(j, base_dir);
    params.design = std::move(v);
    params.response = std::move(y);
    params.dof = require(j, "nu").get<double>();
    params.scale = require(j, "delta").get<double>();
    params.noise_cov = j.contains("noise_cov")
                           ? to_matrix(j.at("noise_cov"), "noise_cov")
                           : Eigen::MatrixXd::Identity(params.response.size(),
                                                       params.response.size());
    return make_studentt_target(std::move(params));
  }
  throw config_error("unknown target kind: " + kind);
}

DiffusionSpec diffusion_from_json(const json& j, TargetModel& target) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "langevin") return langevin_spec(target.dim);
  if (kind == "preconditioned") {
    return preconditioned_spec(to_matrix(require(j, "a"), "a"));
  }
  if (kind == "nonreversible") {
    return nonreversible_spec(to_matrix(require(j, "a"), "a"),
                              to_matrix(require(j, "c"), "c"));
  }
  if (kind == "riemannian_pseudo_huber") {
    return riemannian_pseudo_huber_spec(require(j, "delta").get<double>(), target.dim);
  }
  if (kind == "second_order") {
    const int base_dim = target.dim;
    target = second_order_target(target);
    return second_order_spec(base_dim);
  }
  throw config_error("unknown diffusion kind: " + kind);
}

ChainSpec chain_from_json(const json& j, const TargetModel& target) {
  ChainSpec spec;
  spec.kind = require(j, "kind").get<std::string>();
  if (spec.kind == "iid") {
    spec.iid_n = require(j, "n").get<long>();
    if (spec.iid_n < 1) throw config_error("iid chain needs n >= 1");
    return spec;
  }
  ChainConfig& cfg = spec.cfg;
  cfg.epsilon = require(j, "epsilon").get<double>();
  if (cfg.epsilon <= 0.0) throw config_error("step size must be positive");
  cfg.n_steps = require(j, "n_steps").get<long>();
  cfg.thin = j.value("thin", 1L);
  cfg.burn_in = j.value("burn_in", 0.1);
  cfg.minibatch = j.value("minibatch", 0);
  cfg.init = j.contains("init") ? to_vector(j.at("init"), "init")
                                : Eigen::VectorXd::Zero(target.dim);
  if (spec.kind == "mala") return spec;
  if (spec.kind == "sgrld") {
    const json& metric = require(j, "metric");
    const std::string mkind = require(metric, "kind").get<std::string>();
    if (mkind == "pseudo_huber") {
      spec.metric = pseudo_huber_metric(require(metric, "delta").get<double>());
    } else if (mkind == "identity") {
      RiemannianMetric m;
      const int dim = target.dim;
      m.ginv = [dim](const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Identity(dim, dim).eval();
      };
      m.correction = [dim](const Eigen::VectorXd&) {
        return Eigen::VectorXd::Zero(dim).eval();
      };
      spec.metric = std::move(m);
    } else {
      throw config_error("unknown metric kind: " + mkind);
    }
    return spec;
  }
  throw config_error("unknown chain kind: " + spec.kind);
}

}  // namespace

TargetModel load_target(const std::string& path) {
  return target_from_json(parse_file(path), fs::path(path).parent_path());
}

TargetModel target_from_json_string(const std::string& text, const std::string& base_dir) {
  return target_from_json(parse_string(text), fs::path(base_dir));
}

DiffusionSpec load_diffusion(const std::string& path, TargetModel& target) {
  return diffusion_from_json(parse_file(path), target);
}

DiffusionSpec diffusion_from_json_string(const std::string& text, TargetModel& target) {
  return diffusion_from_json(parse_string(text), target);
}

Problem load_problem(const std::string& target_path, const std::string& diffusion_path) {
  Problem problem;
  problem.target = load_target(target_path);
  problem.spec = load_diffusion(diffusion_path, problem.target);
  return problem;
}

ChainSpec load_chain(const std::string& path, const TargetModel& target) {
  return chain_from_json(parse_file(path), target);
}

ChainSpec chain_from_json_string(const std::string& text, const TargetModel& target) {
  return chain_from_json(parse_string(text), target);
}

ChainResult run_chain(const TargetModel& target, const ChainSpec& chain) {
  if (chain.kind == "iid") {
    if (!target.sampler) throw config_error("iid chain requires a target with an exact sampler");
    Rng rng(chain.cfg.seed);
    Eigen::MatrixXd points(chain.iid_n, target.dim);
    for (long i = 0; i < chain.iid_n; ++i) points.row(i) = (*target.sampler)(rng);
    return {WeightedSample::uniform_collapsed(points), {1.0, chain.iid_n}};
  }
  if (chain.kind == "mala") return mala_chain(target, chain.cfg);
  if (chain.kind == "sgrld") return sgrld_chain(target, *chain.metric, chain.cfg);
  throw config_error("unknown chain kind: " + chain.kind);
}

}  // namespace steinbench

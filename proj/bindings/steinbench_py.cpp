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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "steinbench/config.hpp"
#include "steinbench/errors.hpp"
#include "steinbench/metrics.hpp"
#include "steinbench/sample.hpp"
#include "steinbench/spanner.hpp"
#include "steinbench/steinlp.hpp"

namespace py = pybind11;
namespace sb = steinbench;

namespace {

sb::WeightedSample make_sample(const Eigen::MatrixXd& points,
                               const std::optional<Eigen::VectorXd>& weights) {
  if (weights) return sb::WeightedSample(points, *weights);
  return sb::WeightedSample::uniform(points);
}

sb::Problem make_problem(const std::string& target_json, const std::string& diffusion_json) {
  sb::Problem problem;
  problem.target = sb::target_from_json_string(target_json);
  problem.spec = sb::diffusion_from_json_string(diffusion_json, problem.target);
  return problem;
}

py::dict witness_dict(const sb::SteinWitness& w) {
  py::dict out;
  out["value"] = w.value;
  out["coord_values"] = w.coord_values;
  out["psi"] = w.psi;
  py::list grad;
  for (const auto& g : w.grad) grad.append(g);
  out["Psi"] = grad;
  out["h_star"] = w.h_star;
  return out;
}

}  // namespace

PYBIND11_MODULE(_steinbench, m) {
  m.doc() = "spanner diffusion Stein discrepancies";

  py::register_exception<sb::config_error>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<sb::ingest_error>(m, "IngestError", PyExc_ValueError);
  py::register_exception<sb::solver_error>(m, "SolverError", PyExc_RuntimeError);

  m.def(
      "load_sample",
      [](const std::string& path, bool weight_column) {
        const auto s = sb::load_sample(
            path, weight_column ? sb::WeightMode::column : sb::WeightMode::uniform);
        return py::make_tuple(s.points(), s.weights());
      },
      py::arg("path"), py::arg("weight_column") = false);

  m.def(
      "discrepancy",
      [](const Eigen::MatrixXd& points, const std::optional<Eigen::VectorXd>& weights,
         const std::string& target_json, const std::string& diffusion_json, double stretch,
         std::tuple<double, double, double> scales, int threads) {
        const auto sample = make_sample(points, weights);
        auto problem = make_problem(target_json, diffusion_json);
        sb::SteinOptions opts;
        opts.stretch = stretch;
        opts.scales = {std::get<0>(scales), std::get<1>(scales), std::get<2>(scales)};
        opts.threads = threads;
        return witness_dict(
            sb::spanner_stein_discrepancy(sample, problem.target, problem.spec, opts));
      },
      py::arg("points"), py::arg("weights") = std::nullopt, py::arg("target"),
      py::arg("diffusion"), py::arg("stretch") = 2.0,
      py::arg("scales") = std::tuple<double, double, double>{1.0, 1.0, 1.0},
      py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

  m.def(
      "build_spanner",
      [](const Eigen::MatrixXd& points, double stretch) {
        const auto sample = sb::WeightedSample::uniform(points);
        const auto graph = points.cols() == 1 ? sb::build_sorted_1d_spanner(sample)
                                              : sb::build_greedy_spanner(sample, stretch);
        Eigen::MatrixXd edges(static_cast<Eigen::Index>(graph.edges.size()), 3);
        for (std::size_t k = 0; k < graph.edges.size(); ++k) {
          edges(static_cast<Eigen::Index>(k), 0) = graph.edges[k].i;
          edges(static_cast<Eigen::Index>(k), 1) = graph.edges[k].l;
          edges(static_cast<Eigen::Index>(k), 2) = graph.edges[k].w;
        }
        return edges;
      },
      py::arg("points"), py::arg("stretch") = 2.0);

  m.def(
      "verify_spanner",
      [](const Eigen::MatrixXd& points, const Eigen::MatrixXd& edges, double stretch) {
        const auto sample = sb::WeightedSample::uniform(points);
        sb::SpannerGraph graph;
        graph.n = static_cast<int>(points.rows());
        graph.stretch = stretch;
        for (Eigen::Index r = 0; r < edges.rows(); ++r) {
          const int i = static_cast<int>(edges(r, 0));
          const int l = static_cast<int>(edges(r, 1));
          graph.edges.push_back({std::min(i, l), std::max(i, l), edges(r, 2)});
        }
        return sb::verify_spanner(graph, sample, stretch).ok;
      },
      py::arg("points"), py::arg("edges"), py::arg("stretch"));

  m.def(
      "wasserstein_1d",
      [](const Eigen::MatrixXd& points1, const std::optional<Eigen::VectorXd>& weights1,
         const Eigen::MatrixXd& points2, const std::optional<Eigen::VectorXd>& weights2) {
        return sb::wasserstein_1d(make_sample(points1, weights1),
                                  make_sample(points2, weights2));
      },
      py::arg("points1"), py::arg("weights1") = std::nullopt, py::arg("points2"),
      py::arg("weights2") = std::nullopt);

  m.def(
      "coupled_upper_bound",
      [](const Eigen::MatrixXd& points_q, const Eigen::MatrixXd& points_p,
         const std::string& target_json, const std::string& diffusion_json) {
        auto problem = make_problem(target_json, diffusion_json);
        return sb::coupled_upper_bound(sb::WeightedSample::uniform(points_q),
                                       sb::WeightedSample::uniform(points_p), problem.target,
                                       problem.spec);
      },
      py::arg("points_q"), py::arg("points_p"), py::arg("target"), py::arg("diffusion"));

  m.def(
      "sample_chain",
      [](const std::string& target_json, const std::string& chain_json, std::uint64_t seed,
         const std::optional<std::string>& diffusion_json) {
        auto target = sb::target_from_json_string(target_json);
        if (diffusion_json) sb::diffusion_from_json_string(*diffusion_json, target);
        auto chain = sb::chain_from_json_string(chain_json, target);
        chain.cfg.seed = seed;
        if (chain.cfg.init.size() == 0) chain.cfg.init = Eigen::VectorXd::Zero(target.dim);
        const auto result = sb::run_chain(target, chain);
        py::dict out;
        out["points"] = result.sample.points();
        out["weights"] = result.sample.weights();
        out["accept_rate"] = result.stats.accept_rate;
        return out;
      },
      py::arg("target"), py::arg("chain"), py::arg("seed") = 0,
      py::arg("diffusion") = std::nullopt);

  m.def(
      "fit_rate",
      [](const std::vector<long>& sizes, const std::vector<double>& values) {
        if (sizes.size() != values.size()) {
          throw sb::config_error("sizes and values must have equal length");
        }
        std::vector<std::pair<long, double>> pairs;
        for (std::size_t k = 0; k < sizes.size(); ++k) pairs.emplace_back(sizes[k], values[k]);
        const auto fit = sb::fit_rate(pairs);
        py::dict out;
        out["slope"] = fit.slope;
        out["intercept"] = fit.intercept;
        out["residual_rms"] = fit.residual_rms;
        return out;
      },
      py::arg("sizes"), py::arg("values"));
}

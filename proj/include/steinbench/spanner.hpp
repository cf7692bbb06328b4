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
#include <vector>

#include "steinbench/sample.hpp"

namespace steinbench {

/// Undirected weighted graph over sample indices. Edge weights equal the
/// l1 distance of their endpoints; all distances in this module are l1.
struct SpannerGraph {
  struct Edge {
    int i;     // i < l
    int l;
    double w;  // |x_i - x_l|_1
  };
  int n = 0;
  std::vector<Edge> edges;
  double stretch = 1.0;
};

/// Classic greedy spanner: all pairs sorted by l1 distance ascending
/// (ties broken lexicographically), an edge is added iff the current
/// graph distance exceeds t times the pair distance. Deterministic for a
/// fixed input order.
SpannerGraph build_greedy_spanner(const WeightedSample& sample, double t);

/// 1-D spanner with exactly n-1 edges between sort-adjacent points;
/// path weights telescope, so it is a t-spanner for every t >= 1.
SpannerGraph build_sorted_1d_spanner(const WeightedSample& sample);

struct SpannerCheck {
  bool ok = true;
  int i = -1;
  int l = -1;
  double graph_distance = 0.0;
  double required = 0.0;  // t * |x_i - x_l|_1
};

/// All-pairs shortest-path oracle (Dijkstra from each vertex). Returns
/// the first pair whose graph distance exceeds t * l1 distance + 1e-9.
SpannerCheck verify_spanner(const SpannerGraph& graph, const WeightedSample& sample, double t);

/// Edge list CSV ("i,l,w" rows). Import recomputes and checks each weight
/// against the sample's l1 distances within 1e-12.
void save_edges(const std::string& path, const SpannerGraph& graph);
SpannerGraph load_edges(const std::string& path, const WeightedSample& sample,
                        double stretch);

/// Every pair as an edge; trivially a 1-spanner. Test/diagnostic helper.
SpannerGraph complete_graph(const WeightedSample& sample);

double l1_distance(const Eigen::MatrixXd& points, int i, int l);

}  // namespace steinbench

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

#include "steinbench/spanner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>

#include "steinbench/errors.hpp"
#include "steinbench/log.hpp"

namespace steinbench {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Adjacency = std::vector<std::vector<std::pair<int, double>>>;

Adjacency adjacency(int n, const std::vector<SpannerGraph::Edge>& edges) {
  Adjacency adj(static_cast<std::size_t>(n));
  for (const auto& e : edges) {
    adj[static_cast<std::size_t>(e.i)].emplace_back(e.l, e.w);
    adj[static_cast<std::size_t>(e.l)].emplace_back(e.i, e.w);
  }
  return adj;
}

// Dijkstra from `source`, stopping once all remaining frontier distances
// exceed `cutoff`. Entries beyond the cutoff stay +inf.
void bounded_dijkstra(const Adjacency& adj, int source, double cutoff,
                      std::vector<double>& dist) {
  dist.assign(adj.size(), kInf);
  dist[static_cast<std::size_t>(source)] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    if (d > cutoff) break;
    for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
      const double nd = d + w;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        queue.emplace(nd, v);
      }
    }
  }
}

}  // namespace

double l1_distance(const Eigen::MatrixXd& points, int i, int l) {
  return (points.row(i) - points.row(l)).cwiseAbs().sum();
}

SpannerGraph build_greedy_spanner(const WeightedSample& sample, double t) {
  if (t < 1.0) throw config_error("spanner stretch must be >= 1");
  const int n = static_cast<int>(sample.size());
  SpannerGraph graph;
  graph.n = n;
  graph.stretch = t;
  if (n < 2) return graph;

  struct Pair {
    double w;
    int i;
    int l;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int l = i + 1; l < n; ++l) {
      pairs.push_back({l1_distance(sample.points(), i, l), i, l});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.i != b.i) return a.i < b.i;
    return a.l < b.l;
  });

  Adjacency adj(static_cast<std::size_t>(n));
  // Cached bounded-Dijkstra results. Distances only shrink as edges are
  // added, so a cached value within budget remains a valid reason to skip;
  // anything else forces a recomputation.
  std::vector<std::vector<double>> cache(static_cast<std::size_t>(n));
  std::vector<double> cache_cutoff(static_cast<std::size_t>(n), -1.0);
  std::vector<long> cache_version(static_cast<std::size_t>(n), -1);
  long version = 0;

  for (const auto& pair : pairs) {
    const double budget = t * pair.w;
    const auto si = static_cast<std::size_t>(pair.i);
    bool skip = false;
    if (cache_version[si] >= 0 && !cache[si].empty() &&
        cache[si][static_cast<std::size_t>(pair.l)] <= budget) {
      skip = true;  // stale upper bound already within budget
    } else if (cache_version[si] == version && cache_cutoff[si] >= budget) {
      skip = cache[si][static_cast<std::size_t>(pair.l)] <= budget;
    } else {
      bounded_dijkstra(adj, pair.i, budget, cache[si]);
      cache_cutoff[si] = budget;
      cache_version[si] = version;
      skip = cache[si][static_cast<std::size_t>(pair.l)] <= budget;
    }
    if (!skip) {
      graph.edges.push_back({pair.i, pair.l, pair.w});
      adj[si].emplace_back(pair.l, pair.w);
      adj[static_cast<std::size_t>(pair.l)].emplace_back(pair.i, pair.w);
      ++version;
    }
  }
  log_debug("greedy spanner: n=%d t=%.3f edges=%zu", n, t, graph.edges.size());
  return graph;
}

SpannerGraph build_sorted_1d_spanner(const WeightedSample& sample) {
  if (sample.dim() != 1) throw config_error("sorted 1-D spanner requires d = 1");
  const int n = static_cast<int>(sample.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return sample.points()(a, 0) < sample.points()(b, 0); });
  SpannerGraph graph;
  graph.n = n;
  graph.stretch = 1.0;
  for (int k = 0; k + 1 < n; ++k) {
    const int a = std::min(order[static_cast<std::size_t>(k)],
                           order[static_cast<std::size_t>(k + 1)]);
    const int b = std::max(order[static_cast<std::size_t>(k)],
                           order[static_cast<std::size_t>(k + 1)]);
    graph.edges.push_back({a, b, l1_distance(sample.points(), a, b)});
  }
  return graph;
}

SpannerCheck verify_spanner(const SpannerGraph& graph, const WeightedSample& sample, double t) {
  if (graph.n != static_cast<int>(sample.size())) {
    throw config_error("spanner vertex count does not match sample");
  }
  const int n = graph.n;
  const auto adj = adjacency(n, graph.edges);
  std::vector<double> dist;
  for (int i = 0; i < n; ++i) {
    bounded_dijkstra(adj, i, kInf, dist);
    for (int l = i + 1; l < n; ++l) {
      const double required = t * l1_distance(sample.points(), i, l);
      if (dist[static_cast<std::size_t>(l)] > required + 1e-9) {
        return {false, i, l, dist[static_cast<std::size_t>(l)], required};
      }
    }
  }
  return {};
}

void save_edges(const std::string& path, const SpannerGraph& graph) {
  std::ofstream out(path);
  if (!out) throw ingest_error("cannot open file for writing: " + path);
  out << "# i,l,w\n";
  char buf[32];
  for (const auto& e : graph.edges) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), e.w);
    out << e.i << ',' << e.l << ',' << std::string_view(buf, res.ptr - buf) << '\n';
  }
}

SpannerGraph load_edges(const std::string& path, const WeightedSample& sample, double stretch) {
  const Eigen::MatrixXd raw = load_matrix_csv(path);
  if (raw.cols() != 3) throw ingest_error("edge CSV must have columns i,l,w");
  SpannerGraph graph;
  graph.n = static_cast<int>(sample.size());
  graph.stretch = stretch;
  for (Eigen::Index r = 0; r < raw.rows(); ++r) {
    const int i = static_cast<int>(raw(r, 0));
    const int l = static_cast<int>(raw(r, 1));
    if (i < 0 || l < 0 || i >= graph.n || l >= graph.n || i == l) {
      throw ingest_error("edge endpoints out of range at row " + std::to_string(r));
    }
    SpannerGraph::Edge e{std::min(i, l), std::max(i, l), raw(r, 2)};
    if (std::abs(e.w - l1_distance(sample.points(), e.i, e.l)) > 1e-12) {
      throw ingest_error("edge weight does not match l1 distance at row " + std::to_string(r));
    }
    graph.edges.push_back(e);
  }
  std::sort(graph.edges.begin(), graph.edges.end(),
            [](const SpannerGraph::Edge& a, const SpannerGraph::Edge& b) {
              return a.i != b.i ? a.i < b.i : a.l < b.l;
            });
  for (std::size_t k = 1; k < graph.edges.size(); ++k) {
    if (graph.edges[k - 1].i == graph.edges[k].i && graph.edges[k - 1].l == graph.edges[k].l) {
      throw ingest_error("duplicate edge in edge CSV");
    }
  }
  return graph;
}

SpannerGraph complete_graph(const WeightedSample& sample) {
  SpannerGraph graph;
  graph.n = static_cast<int>(sample.size());
  graph.stretch = 1.0;
  for (int i = 0; i < graph.n; ++i) {
    for (int l = i + 1; l < graph.n; ++l) {
      graph.edges.push_back({i, l, l1_distance(sample.points(), i, l)});
    }
  }
  return graph;
}

}  // namespace steinbench

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

#include "steinbench/sample.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

namespace steinbench {
namespace {

constexpr double kWeightSumTol = 1e-9;

// Lexicographic order on rows; equal rows end up adjacent.
std::vector<Eigen::Index> sorted_row_order(const Eigen::MatrixXd& pts) {
  std::vector<Eigen::Index> order(pts.rows());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index k = 0; k < pts.cols(); ++k) {
      if (pts(a, k) != pts(b, k)) return pts(a, k) < pts(b, k);
    }
    return false;
  });
  return order;
}

bool rows_equal(const Eigen::MatrixXd& pts, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index k = 0; k < pts.cols(); ++k) {
    if (pts(a, k) != pts(b, k)) return false;
  }
  return true;
}

void validate(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights) {
  if (points.rows() < 1 || points.cols() < 1) {
    throw ingest_error("sample must have n >= 1 points and d >= 1 columns");
  }
  if (weights.size() != points.rows()) {
    throw ingest_error("weight count does not match point count");
  }
  if (!points.allFinite()) throw ingest_error("sample contains non-finite point coordinates");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] <= 0.0) {
      throw ingest_error("weight " + std::to_string(i) + " is not strictly positive");
    }
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    throw ingest_error("weights sum to " + std::to_string(sum) + ", expected 1");
  }
  const auto order = sorted_row_order(points);
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (rows_equal(points, order[k - 1], order[k])) {
      throw ingest_error("duplicate point at rows " + std::to_string(order[k - 1]) +
                         " and " + std::to_string(order[k]));
    }
  }
}

double parse_field(const std::string& field, int line_no) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end || begin == end) {
    throw ingest_error("CSV parse failure at line " + std::to_string(line_no) +
                       ": '" + field + "'");
  }
  if (!std::isfinite(out)) {
    throw ingest_error("non-finite value at line " + std::to_string(line_no));
  }
  return out;
}

std::vector<std::vector<double>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ingest_error("cannot open file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string field = line.substr(start, comma == std::string::npos
                                                       ? std::string::npos
                                                       : comma - start);
      row.push_back(parse_field(field, line_no));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && rows.front().size() != row.size()) {
      throw ingest_error("inconsistent column count at line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ingest_error("no data rows in " + path);
  return rows;
}

// Shortest representation that round-trips the double exactly.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

WeightedSample::WeightedSample(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  validate(points_, weights_);
}

WeightedSample WeightedSample::uniform(Eigen::MatrixXd points) {
  Eigen::VectorXd w =
      Eigen::VectorXd::Constant(points.rows(), 1.0 / static_cast<double>(points.rows()));
  return WeightedSample(std::move(points), std::move(w));
}

WeightedSample WeightedSample::uniform_collapsed(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  if (n < 1) throw ingest_error("empty point set");
  const auto order = sorted_row_order(points);
  std::vector<Eigen::Index> reps;
  std::vector<double> mass;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k > 0 && rows_equal(points, order[k - 1], order[k])) {
      mass.back() += 1.0;
    } else {
      reps.push_back(order[k]);
      mass.push_back(1.0);
    }
  }
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(reps.size()), points.cols());
  Eigen::VectorXd w(static_cast<Eigen::Index>(reps.size()));
  for (std::size_t k = 0; k < reps.size(); ++k) {
    pts.row(static_cast<Eigen::Index>(k)) = points.row(reps[k]);
    w[static_cast<Eigen::Index>(k)] = mass[k] / static_cast<double>(n);
  }
  return WeightedSample(std::move(pts), std::move(w));
}

WeightedSample WeightedSample::prefix(Eigen::Index n) const {
  if (n < 1 || n > size()) throw ingest_error("prefix length out of range");
  return uniform_collapsed(points_.topRows(n));
}

WeightedSample load_sample(const std::string& path, WeightMode mode) {
  const auto rows = read_csv_rows(path);
  const std::size_t cols = rows.front().size();
  const std::size_t d = mode == WeightMode::column ? cols - 1 : cols;
  if (d < 1) throw ingest_error("no coordinate columns in " + path);
  Eigen::MatrixXd points(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  Eigen::VectorXd weights(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
    if (mode == WeightMode::column) weights[static_cast<Eigen::Index>(i)] = rows[i][d];
  }
  if (mode == WeightMode::uniform) {
    return WeightedSample::uniform(std::move(points));
  }
  return WeightedSample(std::move(points), std::move(weights));
}

void save_sample(const std::string& path, const WeightedSample& sample, WeightMode mode) {
  std::ofstream out(path);
  if (!out) throw ingest_error("cannot open file for writing: " + path);
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    for (Eigen::Index k = 0; k < sample.dim(); ++k) {
      if (k > 0) out << ',';
      out << format_double(sample.points()(i, k));
    }
    if (mode == WeightMode::column) out << ',' << format_double(sample.weights()[i]);
    out << '\n';
  }
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  const auto rows = read_csv_rows(path);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return m;
}

}  // namespace steinbench

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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "steinbench/errors.hpp"
#include "steinbench/rng.hpp"

using namespace steinbench;

namespace {

std::string write_temp(const std::string& content) {
  static int counter = 0;
  const auto path = std::filesystem::temp_directory_path() /
                    ("steinbench_sample_" + std::to_string(counter++) + ".csv");
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("uniform load assigns 1/n weights") {
  const auto path = write_temp("0\n1\n3\n");
  const WeightedSample s = load_sample(path, WeightMode::uniform);
  REQUIRE(s.size() == 3);
  REQUIRE(s.dim() == 1);
  CHECK(s.points()(0, 0) == 0.0);
  CHECK(s.points()(1, 0) == 1.0);
  CHECK(s.points()(2, 0) == 3.0);
  for (int i = 0; i < 3; ++i) CHECK(s.weights()[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("column mode reads trailing weights") {
  const auto path = write_temp("1,0.25\n2,0.75\n");
  const WeightedSample s = load_sample(path, WeightMode::column);
  REQUIRE(s.size() == 2);
  CHECK(s.weights()[0] == 0.25);
  CHECK(s.weights()[1] == 0.75);
}

TEST_CASE("duplicate points rejected") {
  const auto path = write_temp("0,0.5\n0,0.5\n");
  CHECK_THROWS_AS(load_sample(path, WeightMode::column), ingest_error);
  CHECK_THROWS_AS(load_sample(path, WeightMode::uniform), ingest_error);
}

TEST_CASE("weight errors") {
  CHECK_THROWS_AS(load_sample(write_temp("1,-0.5\n2,1.5\n"), WeightMode::column), ingest_error);
  CHECK_THROWS_AS(load_sample(write_temp("1,0.4\n2,0.4\n"), WeightMode::column), ingest_error);
  CHECK_THROWS_AS(load_sample(write_temp("1,0\n2,1\n"), WeightMode::column), ingest_error);
}

TEST_CASE("parse failures") {
  CHECK_THROWS_AS(load_sample(write_temp("1,abc\n"), WeightMode::uniform), ingest_error);
  CHECK_THROWS_AS(load_sample(write_temp("1,2\n3\n"), WeightMode::uniform), ingest_error);
  CHECK_THROWS_AS(load_sample(write_temp(""), WeightMode::uniform), ingest_error);
  CHECK_THROWS_AS(load_sample("/nonexistent/file.csv", WeightMode::uniform), ingest_error);
  CHECK_THROWS_AS(load_sample(write_temp("inf\n1\n"), WeightMode::uniform), ingest_error);
}

TEST_CASE("header and blank lines skipped") {
  const auto path = write_temp("# x,y\n\n0,1\n2,3\n");
  const WeightedSample s = load_sample(path, WeightMode::uniform);
  CHECK(s.size() == 2);
  CHECK(s.dim() == 2);
}

TEST_CASE("save/load round-trip is bit-exact") {
  Rng rng(7);
  Eigen::MatrixXd pts(6, 3);
  for (int i = 0; i < 6; ++i) {
    for (int k = 0; k < 3; ++k) pts(i, k) = rng.normal() * std::pow(10.0, 3.0 * rng.normal());
  }
  pts(0, 0) = 1e-300;
  pts(1, 1) = -0.0;
  pts(2, 2) = 3.141592653589793;
  Eigen::VectorXd w(6);
  w << 0.1, 0.2, 0.3, 0.15, 0.05, 0.2;
  const WeightedSample original(pts, w);

  const auto path = write_temp("");
  save_sample(path, original, WeightMode::column);
  const WeightedSample loaded = load_sample(path, WeightMode::column);
  REQUIRE(loaded.size() == original.size());
  for (int i = 0; i < 6; ++i) {
    CHECK(loaded.weights()[i] == original.weights()[i]);
    for (int k = 0; k < 3; ++k) CHECK(loaded.points()(i, k) == original.points()(i, k));
  }

  save_sample(path, original, WeightMode::uniform);
  const WeightedSample points_only = load_sample(path, WeightMode::uniform);
  CHECK(points_only.dim() == 3);
}

TEST_CASE("constructor invariants hold on randomized malformed inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(8));
    const int d = 1 + static_cast<int>(rng.below(3));
    Eigen::MatrixXd pts(n, d);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) pts(i, k) = rng.normal();
    }
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
    switch (rng.below(3)) {
      case 0:  // duplicate a row
        pts.row(n - 1) = pts.row(0);
        break;
      case 1:  // negative weight, sum preserved
        w[0] = -w[0];
        w[1] += 2.0 / n;
        break;
      default:  // bad sum
        w[0] += 1e-6;
        break;
    }
    CHECK_THROWS_AS(WeightedSample(pts, w), ingest_error);
  }
}

TEST_CASE("uniform_collapsed merges duplicate support") {
  Eigen::MatrixXd pts(4, 1);
  pts << 1.0, 2.0, 1.0, 3.0;
  const WeightedSample s = WeightedSample::uniform_collapsed(pts);
  REQUIRE(s.size() == 3);
  double mass_at_one = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (s.points()(i, 0) == 1.0) mass_at_one = s.weights()[i];
  }
  CHECK(mass_at_one == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("prefix reweights uniformly") {
  Eigen::MatrixXd pts(4, 1);
  pts << 0.0, 1.0, 2.0, 3.0;
  Eigen::VectorXd w(4);
  w << 0.7, 0.1, 0.1, 0.1;
  const WeightedSample s(pts, w);
  const WeightedSample p = s.prefix(2);
  REQUIRE(p.size() == 2);
  CHECK(p.weights()[0] == 0.5);
  CHECK_THROWS_AS(s.prefix(0), ingest_error);
  CHECK_THROWS_AS(s.prefix(5), ingest_error);
}

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

#include <stdexcept>
#include <string>

namespace steinbench {

/// Bad configuration: malformed JSON, invalid parameters, missing files
/// named on the command line. Maps to CLI exit code 1.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad input data: CSV parse failures, invariant violations on ingested
/// samples. Maps to CLI exit code 2.
class ingest_error : public std::runtime_error {
 public:
  explicit ingest_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure in a solver or sampler (iteration limit, singular
/// basis, non-SPD metric). Maps to CLI exit code 3.
class solver_error : public std::runtime_error {
 public:
  explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace steinbench

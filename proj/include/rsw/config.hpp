// Copyright 2026 The rsw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rsw {

/// Experiment description. Text form is one "key = value" per line with
/// '#' comments; lists are comma separated.
struct ExperimentConfig {
  std::string problem = "gaussian";  // gaussian | banana | files
  int d = 3;
  int atoms = 500;  // atoms per generated measure
  std::string mu_path;
  std::string nu_path;
  double p = 2.0;
  std::vector<std::string> methods{"iid"};  // node method, optionally "+cv_low", "+cv_up", "+shcv[:L]"
  std::vector<int> nodes{100};
  int replications = 100;
  std::uint64_t seed = 0;
  std::string reference_method = "auto";  // auto | exact | any node method
  long long reference_nodes = 0;          // 0: 1e5 for d <= 3, 1e6 otherwise
  std::string output = "report";          // writes <output>.csv and <output>.json
  std::vector<double> epsilons;           // sweep-eps grid
  std::string integrand = "sw";           // sw | halfsphere
  double level = 0.95;
  int threads = 0;  // 0: hardware concurrency
  std::string base_method = "iid";
  double repel_s = 0.0;  // 0: s = d
  double isvmf_r = 0.2;

  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig load(const std::string& path);
  /// Applies "key=value"; unknown keys are an error.
  void set(const std::string& key, const std::string& value);
  void apply_override(const std::string& assignment);
  /// Keys and values in schema order, values in their text form.
  std::vector<std::pair<std::string, std::string>> entries() const;
  void validate() const;
  long long effective_reference_nodes() const;
};

}  // namespace rsw

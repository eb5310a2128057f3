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
#include <map>
#include <optional>
#include <string>

#include "rsw/sphere.hpp"

namespace rsw {

/// Per-node quadrature: estimate of int f dsigma is sum_i weights[i] f(nodes.col(i)).
struct QuadratureNodes {
  Matrix nodes;    // d x N, unit columns
  Vector weights;  // N
  std::string method;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
  /// Counters and flags produced during generation (rejections, retries, ...).
  std::map<std::string, double> diagnostics;
  double generation_seconds = 0.0;
  /// True when the nodes target the uniform measure with weights 1/N.
  bool uniform_weights = true;
  /// Intensity of the base process when it was Poisson; empty for binomial.
  std::optional<double> intensity;

  int dim() const { return static_cast<int>(nodes.rows()); }
  int size() const { return static_cast<int>(nodes.cols()); }
};

/// Checks unit norms and weight count; throws on violation.
void validate_nodes(const QuadratureNodes& q);

}  // namespace rsw

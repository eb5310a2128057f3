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

#include <string>
#include <vector>

#include "rsw/sphere.hpp"

namespace rsw {

struct EstimatorDiagnostics {
  Vector coefficients;  // fitted control-variate coefficients
  int controls = 0;
  int rank = 0;
  double condition_number = 1.0;
  std::vector<std::string> flags;
};

struct EstimatorResult {
  double value = 0.0;     // estimate of the integral (SW_p^p for the SW integrand)
  double sw_value = 0.0;  // p-th root of value
  long long evaluations = 0;
  double wall_seconds = 0.0;
  double generation_seconds = 0.0;  // node generation share of wall_seconds
  bool clipped = false;
  EstimatorDiagnostics diagnostics;
};

}  // namespace rsw

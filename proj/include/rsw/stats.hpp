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

#include <vector>

namespace rsw {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;

  bool contains(double x) const { return lower <= x && x <= upper; }
  bool overlaps(const Interval& o) const { return lower <= o.upper && o.lower <= upper; }
};

double sample_mean(const std::vector<double>& x);
/// Unbiased (n - 1) variance.
double sample_variance(const std::vector<double>& x);
/// Population (n) variance; MSE = this + bias^2 exactly.
double population_variance(const std::vector<double>& x);

Interval ci_mean_gaussian(const std::vector<double>& x, double level);
Interval ci_variance_chi2(const std::vector<double>& x, double level);
/// Per-test level for m simultaneous intervals at joint level `level`.
double bonferroni(double level, int m);

}  // namespace rsw

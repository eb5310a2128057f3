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

#include "rsw/stats.hpp"

#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "rsw/error.hpp"

namespace rsw {

namespace {

void check(const std::vector<double>& x, double level) {
  require(x.size() >= 2, ErrorCode::invalid_argument, "confidence intervals need at least two samples");
  require(level > 0.0 && level < 1.0, ErrorCode::invalid_argument, "level must lie in (0, 1)");
}

}  // namespace

double sample_mean(const std::vector<double>& x) {
  require(!x.empty(), ErrorCode::invalid_argument, "no samples");
  double s = 0.0;
  for (double v : x) s += v;
  return s / x.size();
}

double population_variance(const std::vector<double>& x) {
  const double m = sample_mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / x.size();
}

double sample_variance(const std::vector<double>& x) {
  require(x.size() >= 2, ErrorCode::invalid_argument, "variance needs at least two samples");
  return population_variance(x) * x.size() / (x.size() - 1.0);
}

Interval ci_mean_gaussian(const std::vector<double>& x, double level) {
  check(x, level);
  const double m = sample_mean(x);
  const double se = std::sqrt(sample_variance(x) / x.size());
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * level);
  return {m - z * se, m + z * se, level};
}

Interval ci_variance_chi2(const std::vector<double>& x, double level) {
  check(x, level);
  const double dof = x.size() - 1.0;
  const double s2 = sample_variance(x);
  const boost::math::chi_squared chi(dof);
  const double hi_q = boost::math::quantile(chi, 0.5 + 0.5 * level);
  const double lo_q = boost::math::quantile(chi, 0.5 - 0.5 * level);
  return {dof * s2 / hi_q, dof * s2 / lo_q, level};
}

double bonferroni(double level, int m) {
  require(level > 0.0 && level < 1.0, ErrorCode::invalid_argument, "level must lie in (0, 1)");
  require(m >= 1, ErrorCode::invalid_argument, "need at least one interval");
  return 1.0 - (1.0 - level) / m;
}

}  // namespace rsw

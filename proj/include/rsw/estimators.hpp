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

#include <functional>
#include <memory>
#include <string>

#include "rsw/harmonics.hpp"
#include "rsw/nodes.hpp"
#include "rsw/result.hpp"
#include "rsw/sphere.hpp"
#include "rsw/transport.hpp"

namespace rsw {

/// f evaluated at every column of nodes.
Vector evaluate(const Integrand& f, const Matrix& nodes);

/// sum_i w_i f(theta_i); nodes must carry weights summing to 1.
EstimatorResult mc_mean(const Integrand& f, const QuadratureNodes& q);

/// (1/N) sum_i f(theta_i) / g(theta_i), g relative to the uniform measure.
EstimatorResult is_estimate(const Integrand& f, const Matrix& nodes, const Vector& densities);

/// r * mean over pilots + (1 - r) * importance mean over proposals.
EstimatorResult is_estimate_two_phase(const Integrand& f, const Matrix& pilots, const Matrix& proposals,
                                      const Vector& densities, double budget_fraction);

/// Weighted sum without normalization checks (ISVMF, OPE, ...).
EstimatorResult weighted_estimate(const Integrand& f, const QuadratureNodes& q);

struct ControlFamily {
  std::string tag;  // low | up | sh:L
  int count = 0;
  std::function<Vector(DirectionRef)> eval;

  Matrix design(const Matrix& nodes) const;  // N x count
};

ControlFamily cv_low(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
ControlFamily cv_up(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
/// All harmonics of degree 1..max_degree.
ControlFamily shcv_controls(std::shared_ptr<const HarmonicBasis> basis, int max_degree);

int shcv_default_degree(int d);

struct OlsOptions {
  double rank_tol = 1e-10;
};

/// Least-squares fit of f on (1, phi_1..phi_s) over uniformly weighted nodes.
EstimatorResult ols_cv_estimate(const Integrand& f, const QuadratureNodes& q, const ControlFamily& controls,
                                const OlsOptions& opts = {});
/// Same fit from precomputed values (N) and design (N x s).
EstimatorResult ols_cv_fit(const Vector& values, const Matrix& design, const OlsOptions& opts = {});

/// Repelled estimator: 1/rho normalization for a Poisson base, 1/N otherwise.
EstimatorResult repelled_estimate(const Integrand& f, const QuadratureNodes& q);

/// Clips a negative SW_p^p estimate to 0 and fills sw_value.
void finalize_sw(EstimatorResult& r, double p);

}  // namespace rsw

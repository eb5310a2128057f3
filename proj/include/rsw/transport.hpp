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

#include <memory>
#include <vector>

#include "rsw/nodes.hpp"
#include "rsw/result.hpp"
#include "rsw/sphere.hpp"

namespace rsw {

struct MeasureMoments {
  Vector mean;
  Matrix covariance;
  double trace = 0.0;
};

/// Weighted atoms in R^d. Atoms are the columns of a d x M matrix.
class DiscreteMeasure {
 public:
  DiscreteMeasure(Matrix atoms, Vector weights);
  static DiscreteMeasure uniform(Matrix atoms);

  const Matrix& atoms() const { return atoms_; }
  const Vector& weights() const { return weights_; }
  int dim() const { return static_cast<int>(atoms_.rows()); }
  int size() const { return static_cast<int>(atoms_.cols()); }
  bool has_uniform_weights() const { return uniform_; }

  MeasureMoments moments() const;
  /// int |x|^p dmu
  double moment(double p) const;

 private:
  Matrix atoms_;
  Vector weights_;
  bool uniform_ = false;
};

/// Push-forward of a measure by x -> <theta, x>.
struct Projected1D {
  std::vector<double> positions;
  std::vector<double> weights;
};

Projected1D project_measure(const DiscreteMeasure& m, DirectionRef theta);

/// W_p(a, b)^p via the quantile coupling.
double wasserstein_1d(const Projected1D& a, const Projected1D& b, double p);

/// theta -> W_p^p(theta#mu, theta#nu). The returned closure shares the measures.
Integrand sw_integrand(std::shared_ptr<const DiscreteMeasure> mu,
                       std::shared_ptr<const DiscreteMeasure> nu, double p);
Integrand sw_integrand(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

/// Plain weighted quadrature of the SW integrand; value is sum w_i f(theta_i),
/// sw_value its p-th root.
EstimatorResult estimate_sw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                            const QuadratureNodes& nodes);

}  // namespace rsw

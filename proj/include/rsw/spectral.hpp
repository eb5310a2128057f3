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

#include <iosfwd>
#include <vector>

#include "rsw/harmonics.hpp"
#include "rsw/nodes.hpp"
#include "rsw/rng.hpp"
#include "rsw/sphere.hpp"

namespace rsw {

/// lambda_{2l} = Gamma((d-1)/2) Gamma(l+1/2) / (sqrt(pi) Gamma(l+(d-1)/2)).
double lambda_coeff(int d, int l);
/// alpha_l = (2l+1)/(2l+d-1); lambda_{2l} = alpha_{l-1} lambda_{2l-2}.
double alpha_coeff(int d, int l);

/// Average of f over the great subsphere orthogonal to u. Trapezoidal rule
/// with m nodes for d = 3, Monte Carlo with mc_nodes points for d > 3.
double funk_transform_numeric(const Integrand& f, DirectionRef u, int m, Seed seed = Seed(0),
                              int mc_nodes = 10000);

struct SpectralProfile {
  int dim = 0;
  int max_degree = 0;
  std::vector<Vector> coefficients;  // index l, entries k = 1..h_l
  std::vector<double> energies;      // mu_l
  double mean = 0.0;
  double variance = 0.0;

  /// mu_l, zero beyond the computed range.
  double energy(int l) const;
};

SpectralProfile spectral_profile(const Integrand& f, const HarmonicBasis& basis, int max_degree,
                                 const QuadratureNodes& nodes);

struct VariancePrediction {
  double crude_per_frame = 0.0;  // Var f / d
  double per_frame = 0.0;        // Var of the mean over one frame
  double per_frame_alt = 0.0;    // paired-sum form of the same quantity
  double covariance = 0.0;       // Cov(f(X_1), f(X_2)) within a frame
  double full = 0.0;             // Var of the N-node estimator
  int frames = 0;                // complete frames
  int partial = 0;               // columns in the last incomplete frame
  double tail_bound = 0.0;
  bool tail_warning = false;
};

/// UnifOrtho variance from a spectral profile. Frames are independent; an
/// incomplete last frame of r columns contributes r Var f + r(r-1) Cov.
VariancePrediction unifortho_variance_predict(const SpectralProfile& profile, int n, double tail_tol = 1e-6);

/// Columns degree,mu,lambda,funk_eigenvalue.
void write_profile_csv(std::ostream& os, const SpectralProfile& profile);

}  // namespace rsw

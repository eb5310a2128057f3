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

#include "rsw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <Eigen/QR>

#include "rsw/error.hpp"

namespace rsw {

double lambda_coeff(int d, int l) {
  require(d >= 2 && l >= 0, ErrorCode::invalid_argument, "lambda_coeff needs d >= 2 and l >= 0");
  if (l == 0) return 1.0;
  const double h = 0.5 * (d - 1);
  return std::exp(std::lgamma(h) + std::lgamma(l + 0.5) - 0.5 * std::log(M_PI) - std::lgamma(l + h));
}

double alpha_coeff(int d, int l) {
  require(d >= 2 && l >= 0, ErrorCode::invalid_argument, "alpha_coeff needs d >= 2 and l >= 0");
  return (2.0 * l + 1.0) / (2.0 * l + d - 1.0);
}

double funk_transform_numeric(const Integrand& f, DirectionRef u, int m, Seed seed, int mc_nodes) {
  const int d = static_cast<int>(u.size());
  require(d >= 3, ErrorCode::invalid_argument, "the Funk transform needs d >= 3");
  require(m >= 8, ErrorCode::invalid_argument, "circle resolution must be at least 8");
  require(std::abs(u.norm() - 1.0) <= 1e-12, ErrorCode::invalid_argument, "u must be a unit vector");
  const Matrix column = u;
  Eigen::HouseholderQR<Matrix> qr(column);
  const Matrix q = qr.householderQ();
  const Matrix complement = q.rightCols(d - 1);  // orthonormal basis of u-perp
  double sum = 0.0;
  Vector x(d);
  if (d == 3) {
    for (int j = 0; j < m; ++j) {
      const double phi = 2.0 * M_PI * j / m;
      x = std::cos(phi) * complement.col(0) + std::sin(phi) * complement.col(1);
      sum += f(x);
    }
    return sum / m;
  }
  require(mc_nodes >= 1, ErrorCode::invalid_argument, "need at least one Monte Carlo node");
  const Matrix sub = sample_uniform_sphere(d - 1, mc_nodes, seed);
  for (int j = 0; j < mc_nodes; ++j) {
    x = complement * sub.col(j);
    sum += f(x);
  }
  return sum / mc_nodes;
}

double SpectralProfile::energy(int l) const {
  return l >= 0 && l < static_cast<int>(energies.size()) ? energies[l] : 0.0;
}

SpectralProfile spectral_profile(const Integrand& f, const HarmonicBasis& basis, int max_degree,
                                 const QuadratureNodes& nodes) {
  validate_nodes(nodes);
  require(max_degree >= 0, ErrorCode::invalid_argument, "profile degree must be >= 0");
  require(basis.max_degree() >= max_degree, ErrorCode::invalid_argument,
          "harmonic basis does not cover the profile degree");
  require(basis.dim() == nodes.dim(), ErrorCode::dimension_mismatch, "basis and nodes differ in dimension");
  SpectralProfile p;
  p.dim = basis.dim();
  p.max_degree = max_degree;
  p.coefficients.resize(max_degree + 1);
  p.coefficients[0] = Vector::Zero(1);
  for (int l = 1; l <= max_degree; ++l) p.coefficients[l] = Vector::Zero(basis.degree_size(l));
  double second = 0.0;
  for (int i = 0; i < nodes.size(); ++i) {
    const auto x = nodes.nodes.col(i);
    const double wf = nodes.weights[i] * f(x);
    p.coefficients[0][0] += wf;
    second += wf * f(x);
    for (int l = 1; l <= max_degree; ++l) p.coefficients[l] += wf * basis.eval(l, x);
  }
  p.mean = p.coefficients[0][0];
  p.variance = std::max(0.0, second - p.mean * p.mean);
  p.energies.resize(max_degree + 1);
  for (int l = 0; l <= max_degree; ++l) p.energies[l] = p.coefficients[l].squaredNorm();
  return p;
}

VariancePrediction unifortho_variance_predict(const SpectralProfile& profile, int n, double tail_tol) {
  const int d = profile.dim;
  require(d >= 2, ErrorCode::invalid_argument, "profile has no dimension");
  require(n >= 1, ErrorCode::invalid_argument, "node count must be >= 1");
  VariancePrediction out;
  const double var = profile.variance;
  out.crude_per_frame = var / d;

  // Alternating form: sum_l (-1)^(l-1) lambda_{2l} mu_{2l}.
  double alternating = 0.0;
  for (int l = 1; 2 * l <= profile.max_degree; ++l)
    alternating += (l % 2 == 1 ? 1.0 : -1.0) * lambda_coeff(d, l) * profile.energy(2 * l);
  // Paired form: sum_j lambda_{4j-2} (mu_{4j-2} - alpha_{2j-1} mu_{4j}).
  double paired = 0.0;
  for (int j = 1; 4 * j - 2 <= profile.max_degree; ++j)
    paired += lambda_coeff(d, 2 * j - 1) * (profile.energy(4 * j - 2) - alpha_coeff(d, 2 * j - 1) * profile.energy(4 * j));

  const double shrink = (d - 1.0) / d;
  out.per_frame = var / d - shrink * alternating;
  out.per_frame_alt = var / d - shrink * paired;
  const double scale = std::max({std::abs(out.per_frame), std::abs(var), 1e-300});
  require(std::abs(out.per_frame - out.per_frame_alt) <= 1e-10 * scale, ErrorCode::numerical,
          "variance forms disagree");
  out.covariance = -alternating;

  // Energy not captured by the profile, weighted by the largest unresolved lambda.
  double captured = 0.0;
  for (int l = 1; l <= profile.max_degree; ++l) captured += profile.energy(l);
  const double residual = std::max(0.0, var - captured);
  out.tail_bound = shrink * lambda_coeff(d, profile.max_degree / 2 + 1) * residual;
  out.tail_warning = out.tail_bound > tail_tol * std::max(var, 1e-300);

  out.frames = n / d;
  out.partial = n % d;
  const double r = out.partial;
  const double total = out.frames * d * d * out.per_frame + r * var + r * (r - 1.0) * out.covariance;
  out.full = total / (static_cast<double>(n) * n);
  return out;
}

void write_profile_csv(std::ostream& os, const SpectralProfile& profile) {
  os << "degree,mu,lambda,funk_eigenvalue\n";
  os << std::setprecision(17);
  for (int l = 0; l <= profile.max_degree; ++l) {
    const bool even = l % 2 == 0;
    const double lambda = even ? lambda_coeff(profile.dim, l / 2) : 0.0;
    const double funk = even ? ((l / 2) % 2 == 0 ? lambda : -lambda) : 0.0;
    os << l << ',' << profile.energy(l) << ',' << lambda << ',' << funk << '\n';
  }
}

}  // namespace rsw

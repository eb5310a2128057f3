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

#include "rsw/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rsw/error.hpp"

namespace rsw {

UnitVector UnitVector::from_unit(Vector coords) {
  require(coords.size() >= 2, ErrorCode::invalid_argument, "unit vector needs dimension >= 2");
  require(std::abs(coords.norm() - 1.0) <= 1e-12, ErrorCode::invalid_argument,
          "coordinates are not unit-norm");
  return UnitVector(std::move(coords));
}

UnitVector UnitVector::normalize(Vector coords) {
  require(coords.size() >= 2, ErrorCode::invalid_argument, "unit vector needs dimension >= 2");
  const double n = coords.norm();
  require(n > 0.0 && std::isfinite(n), ErrorCode::invalid_argument, "cannot normalize zero vector");
  coords /= n;
  return UnitVector(std::move(coords));
}

OrthogonalFrame::OrthogonalFrame(Matrix q) : q_(std::move(q)) {
  require(q_.rows() == q_.cols() && q_.rows() >= 2, ErrorCode::invalid_argument,
          "orthogonal frame must be square with d >= 2");
  const Matrix gram = q_.transpose() * q_;
  require((gram - Matrix::Identity(q_.rows(), q_.cols())).cwiseAbs().maxCoeff() <= 1e-10,
          ErrorCode::numerical, "frame columns are not orthonormal");
}

Matrix sample_uniform_sphere(int d, int n, Rng& rng) {
  require(d >= 2, ErrorCode::invalid_argument, "sphere dimension d must be >= 2");
  require(n >= 1, ErrorCode::invalid_argument, "sample count must be >= 1");
  Matrix out(d, n);
  for (int j = 0; j < n; ++j) {
    double norm = 0.0;
    do {
      for (int i = 0; i < d; ++i) out(i, j) = standard_normal(rng);
      norm = out.col(j).norm();
    } while (norm == 0.0);
    out.col(j) /= norm;
  }
  return out;
}

Matrix sample_uniform_sphere(int d, int n, Seed seed) {
  Rng rng = seed.engine();
  return sample_uniform_sphere(d, n, rng);
}

Matrix haar_orthogonal(int d, Rng& rng) {
  require(d >= 2, ErrorCode::invalid_argument, "Haar frame needs d >= 2");
  Matrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = standard_normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

OrthogonalFrame sample_haar_orthogonal(int d, Seed seed) {
  Rng rng = seed.engine();
  return OrthogonalFrame(haar_orthogonal(d, rng));
}

Eigen::MatrixXcd haar_unitary(int n, Rng& rng) {
  require(n >= 1, ErrorCode::invalid_argument, "Haar unitary needs n >= 1");
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = standard_normal(rng);
      const double im = standard_normal(rng);
      g(i, j) = std::complex<double>(re, im) * std::numbers::sqrt2 * 0.5;
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double mod = std::abs(r(j, j));
    if (mod > 0.0) q.col(j) *= r(j, j) / mod;
  }
  return q;
}

Matrix apply_random_rotation(const Matrix& nodes, Seed seed) {
  require(nodes.cols() >= 1, ErrorCode::invalid_argument, "no nodes to rotate");
  Rng rng = seed.engine();
  const Matrix q = haar_orthogonal(static_cast<int>(nodes.rows()), rng);
  return q * nodes;
}

UnitVector stereographic_inverse(std::complex<double> z) {
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorCode::invalid_argument,
          "stereographic argument must be finite");
  const double m = std::norm(z);
  Vector x(3);
  x << 2.0 * z.real(), 2.0 * z.imag(), m - 1.0;
  x /= (m + 1.0);
  // Rounding can leave |x| a few ulps off; renormalize.
  return UnitVector::normalize(std::move(x));
}

std::complex<double> stereographic(DirectionRef x) {
  require(x.size() == 3, ErrorCode::dimension_mismatch, "stereographic projection is defined on S^2");
  return {x[0] / (1.0 - x[2]), x[1] / (1.0 - x[2])};
}

Vector coordinate_box_upper(int d) {
  require(d >= 2, ErrorCode::invalid_argument, "coordinate box needs d >= 2");
  if (d == 2) return Vector::Constant(1, 2.0 * std::numbers::pi);
  Vector upper = Vector::Constant(d - 1, 2.0 * std::numbers::pi);
  upper[d - 2] = std::numbers::pi;
  return upper;
}

namespace {

double mean_abs_sine_power(int m) {
  return std::exp(std::lgamma(0.5 * (m + 1)) - std::lgamma(0.5 * m + 1.0)) / std::sqrt(std::numbers::pi);
}

}  // namespace

SphericalPoint spherical_coords_map(const Vector& u) {
  const int d = static_cast<int>(u.size()) + 1;
  require(d >= 2, ErrorCode::invalid_argument, "empty coordinate vector");
  const Vector upper = coordinate_box_upper(d);
  for (int k = 0; k < d - 1; ++k)
    require(u[k] >= 0.0 && u[k] <= upper[k], ErrorCode::invalid_argument,
            "spherical coordinates outside the box");

  SphericalPoint out{Vector(d), 1.0};
  if (d == 2) {
    out.point << std::cos(u[0]), std::sin(u[0]);
    return out;
  }
  // u[0] is the azimuth; u[k] (k >= 1) carries |sin|^k in the volume element.
  double r = 1.0;
  for (int k = d - 2; k >= 1; --k) {
    out.point[k + 1] = r * std::cos(u[k]);
    const double s = std::sin(u[k]);
    r *= s;
    out.jacobian *= std::pow(std::abs(s), k) / mean_abs_sine_power(k);
  }
  out.point[0] = r * std::cos(u[0]);
  out.point[1] = r * std::sin(u[0]);
  return out;
}

double geodesic_distance(DirectionRef x, DirectionRef y) {
  return std::acos(std::clamp(x.dot(y), -1.0, 1.0));
}

}  // namespace rsw

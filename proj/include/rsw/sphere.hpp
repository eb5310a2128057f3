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

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "rsw/rng.hpp"

namespace rsw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using DirectionRef = Eigen::Ref<const Eigen::VectorXd>;

/// Real-valued function on the sphere.
using Integrand = std::function<double(DirectionRef)>;

/// Point of S^{d-1}, d >= 2. Construction checks the norm.
class UnitVector {
 public:
  /// Wraps coordinates that are already unit-norm (|1 - |x|| <= 1e-12).
  static UnitVector from_unit(Vector coords);
  /// Normalizes an arbitrary nonzero vector.
  static UnitVector normalize(Vector coords);

  const Vector& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }

 private:
  explicit UnitVector(Vector coords) : coords_(std::move(coords)) {}
  Vector coords_;
};

/// d x d orthogonal matrix; columns are the frame vectors.
class OrthogonalFrame {
 public:
  explicit OrthogonalFrame(Matrix q);

  const Matrix& matrix() const { return q_; }
  int dim() const { return static_cast<int>(q_.rows()); }
  UnitVector column(int j) const { return UnitVector::from_unit(q_.col(j)); }

 private:
  Matrix q_;
};

/// n i.i.d. uniform points on S^{d-1}, returned as the columns of a d x n matrix.
Matrix sample_uniform_sphere(int d, int n, Seed seed);
Matrix sample_uniform_sphere(int d, int n, Rng& rng);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// triangular factor's diagonal forced positive).
OrthogonalFrame sample_haar_orthogonal(int d, Seed seed);
Matrix haar_orthogonal(int d, Rng& rng);

/// Haar-distributed unitary matrix, same construction over C.
Eigen::MatrixXcd haar_unitary(int n, Rng& rng);

/// Multiplies every column by one shared Haar rotation.
Matrix apply_random_rotation(const Matrix& nodes, Seed seed);

/// Inverse stereographic projection from the North pole:
/// z -> (2 Re z, 2 Im z, |z|^2 - 1) / (|z|^2 + 1).
UnitVector stereographic_inverse(std::complex<double> z);
/// Forward projection (x + i y) / (1 - w). Undefined at the North pole.
std::complex<double> stereographic(DirectionRef x);

/// Upper corner of the coordinate box for S^{d-1}: [0,2pi]^{d-2} x [0,pi];
/// for d = 2 the box is the full circle [0, 2pi].
Vector coordinate_box_upper(int d);

struct SphericalPoint {
  Vector point;
  /// Density of the image of the uniform-on-box measure relative to the
  /// uniform sphere measure, i.e. int f(Phi(u)) jacobian(u) du / |box| = int f.
  double jacobian;
};

/// Spherical-coordinate embedding of the box into S^{d-1}, d = u.size() + 1.
SphericalPoint spherical_coords_map(const Vector& u);

/// Geodesic distance on the sphere.
double geodesic_distance(DirectionRef x, DirectionRef y);

}  // namespace rsw

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
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "rsw/rng.hpp"
#include "rsw/sphere.hpp"

namespace rsw {

/// Gegenbauer polynomial C_n^lambda(t), lambda > 0, |t| <= 1.
double gegenbauer_eval(int degree, double lambda, double t);

/// Jacobi polynomial P_n^{(a,b)}(t), a, b > -1.
double jacobi_eval(int degree, double a, double b, double t);

/// Generalized binomial coefficient binom(x + n, n) = Gamma(x+n+1) / (Gamma(n+1) Gamma(x+1)).
double binomial_real(double x, int n);

/// Dimension h_l of the space of degree-l spherical harmonics on S^{d-1}.
long long harmonic_dim(int d, int degree);
/// dim Pi_L = h_0 + ... + h_L, from the closed form.
long long harmonic_cumulative_dim(int d, int max_degree);

struct HarmonicDims {
  std::vector<long long> per_degree;  // h_0..h_L
  long long cumulative = 0;           // pi_L
};

HarmonicDims harmonic_dims(int d, int max_degree);

/// Reproducing kernel Z_l of H_l evaluated at t = <x, y>.
double zonal_kernel(int d, int degree, double t);
double zonal_kernel(int d, int degree, DirectionRef x, DirectionRef y);

struct FundamentalSetOptions {
  int pool_factor = 20;           // candidate pool size is pool_factor * h_l
  double pivot_rel_tol = 1e-8;    // pivots must exceed this times the leading pivot
  int max_attempts = 8;
  bool greedy = true;             // false: accept the first random h_l points
};

/// h_l points whose Gegenbauer Gram matrix C_l is well conditioned, with the
/// lower Cholesky factor of C_l (rows in point order).
struct FundamentalSet {
  int dim = 0;
  int degree = 0;
  Matrix points;    // d x h_l
  Matrix cholesky;  // h_l x h_l lower triangular, C_l = L L^T
};

FundamentalSet build_fundamental_set(int d, int degree, Seed seed, const FundamentalSetOptions& opts = {});

/// Greedy selection restricted to a given candidate pool (columns of `pool`).
/// Throws ErrorCode::construction_failed when fewer than h_l well-conditioned
/// points can be extracted.
FundamentalSet select_fundamental_set(int d, int degree, const Matrix& pool, double pivot_rel_tol = 1e-8);

/// Orthonormal real spherical harmonics (w.r.t. the uniform probability
/// measure) up to a maximum degree, evaluable at arbitrary points.
class HarmonicBasis {
 public:
  HarmonicBasis(int d, int max_degree, Seed seed, const FundamentalSetOptions& opts = {});
  HarmonicBasis(int d, int max_degree, std::uint64_t seed, std::vector<FundamentalSet> sets);

  int dim() const { return d_; }
  int max_degree() const { return max_degree_; }
  std::uint64_t seed() const { return seed_; }
  long long degree_size(int degree) const;
  /// Number of basis functions of degree <= max_degree.
  long long cumulative_size(int max_degree) const;

  /// (Y_k^l(x))_k, k = 1..h_l.
  Vector eval(int degree, DirectionRef x) const;
  /// All Y_k^l for 1 <= l <= max_degree in (l, k) lexicographic order.
  Vector eval_upto(int max_degree, DirectionRef x) const;

  const FundamentalSet& fundamental_set(int degree) const;

  void save(std::ostream& os) const;
  static HarmonicBasis load(std::istream& is);

 private:
  int d_;
  int max_degree_;
  std::uint64_t seed_;
  std::vector<FundamentalSet> sets_;  // index l, empty for l = 0 and for d = 2
};

/// Process-wide cache keyed by (d, L, seed). When the RSW_CACHE_DIR
/// environment variable names a directory, bases are also persisted there.
std::shared_ptr<const HarmonicBasis> cached_harmonic_basis(int d, int max_degree, std::uint64_t seed);

}  // namespace rsw

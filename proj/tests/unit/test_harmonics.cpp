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

#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "rsw/error.hpp"
#include "rsw/harmonics.hpp"
#include "rsw/quadratures.hpp"

using namespace rsw;

namespace {

double log_binom(double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); }

// Explicit sum form of the Jacobi polynomial.
double jacobi_sum(int n, double a, double b, double t) {
  double s = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double c = std::exp(log_binom(n + a, n - j) + log_binom(n + b, j));
    s += c * std::pow((t - 1) / 2, j) * std::pow((t + 1) / 2, n - j);
  }
  return s;
}

}  // namespace

TEST_CASE("gegenbauer polynomials") {
  for (double t : {-0.9, -0.2, 0.0, 0.35, 1.0}) {
    CHECK(gegenbauer_eval(0, 1.3, t) == 1.0);
    CHECK(gegenbauer_eval(1, 1.3, t) == doctest::Approx(2 * 1.3 * t));
    CHECK(gegenbauer_eval(2, 1.3, t) == doctest::Approx(2 * 1.3 * 2.3 * t * t - 1.3));
    CHECK(gegenbauer_eval(5, 0.5, t) == doctest::Approx(std::legendre(5, t)).epsilon(1e-12));
  }
  // lambda = 1 gives Chebyshev polynomials of the second kind.
  const double th = 0.7;
  CHECK(gegenbauer_eval(6, 1.0, std::cos(th)) == doctest::Approx(std::sin(7 * th) / std::sin(th)).epsilon(1e-12));
}

TEST_CASE("jacobi polynomials match the explicit sum") {
  for (int n = 0; n <= 8; ++n)
    for (double t : {-0.8, 0.1, 0.9})
      for (auto [a, b] : {std::pair{1.0, 0.0}, std::pair{1.5, 0.5}, std::pair{0.0, 0.0}})
        CHECK(jacobi_eval(n, a, b, t) == doctest::Approx(jacobi_sum(n, a, b, t)).epsilon(1e-11));
}

TEST_CASE("harmonic space dimensions") {
  for (int l = 0; l <= 10; ++l) {
    CHECK(harmonic_dim(3, l) == 2 * l + 1);
    CHECK(harmonic_dim(4, l) == (l + 1) * (l + 1));
    CHECK(harmonic_dim(2, l) == (l == 0 ? 1 : 2));
  }
  CHECK(harmonic_cumulative_dim(3, 2) == 9);
  CHECK(harmonic_cumulative_dim(3, 4) == 25);
  CHECK(harmonic_cumulative_dim(10, 3) == 1 + 10 + 54 + 210);
  const HarmonicDims dims = harmonic_dims(5, 6);
  long long s = 0;
  for (long long h : dims.per_degree) s += h;
  CHECK(s == dims.cumulative);
  CHECK(binomial_real(5.5, 2) == doctest::Approx(7.5 * 6.5 / 2));
}

TEST_CASE("zonal kernel at t = 1 equals the space dimension") {
  for (int d : {2, 3, 4, 6})
    for (int l = 0; l <= 6; ++l) CHECK(zonal_kernel(d, l, 1.0) == doctest::Approx(harmonic_dim(d, l)));
}

TEST_CASE("basis satisfies the addition formula") {
  for (int d : {2, 3, 4}) {
    const HarmonicBasis basis(d, 6, Seed(3));
    const Matrix pts = sample_uniform_sphere(d, 6, Seed(4));
    for (int l = 1; l <= 6; ++l) {
      REQUIRE(basis.degree_size(l) == harmonic_dim(d, l));
      for (int i = 0; i + 1 < pts.cols(); ++i) {
        const Vector a = basis.eval(l, pts.col(i));
        const Vector b = basis.eval(l, pts.col(i + 1));
        CHECK(a.squaredNorm() == doctest::Approx(harmonic_dim(d, l)).epsilon(1e-9));
        CHECK(a.dot(b) == doctest::Approx(zonal_kernel(d, l, pts.col(i), pts.col(i + 1))).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("basis is orthonormal under a fine quadrature") {
  const int L = 4;
  const HarmonicBasis basis(3, L, Seed(5));
  const QuadratureNodes q = nodes_spiral_sphere(200000, Seed(6));
  const int s = static_cast<int>(basis.cumulative_size(L));
  Matrix gram = Matrix::Zero(s, s);
  for (int i = 0; i < q.size(); ++i) {
    Vector y(s);
    y[0] = 1.0;
    y.tail(s - 1) = basis.eval_upto(L, q.nodes.col(i));
    gram += q.weights[i] * y * y.transpose();
  }
  CHECK((gram - Matrix::Identity(s, s)).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("fundamental set cholesky reproduces the zonal gram") {
  const FundamentalSet fs = build_fundamental_set(4, 3, Seed(7));
  const int h = static_cast<int>(fs.points.cols());
  REQUIRE(h == harmonic_dim(4, 3));
  Matrix g(h, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) g(i, j) = gegenbauer_eval(3, 1.0, fs.points.col(i).dot(fs.points.col(j)));
  CHECK((fs.cholesky * fs.cholesky.transpose() - g).norm() < 1e-9 * g.norm());
}

TEST_CASE("degenerate pool is rejected") {
  Matrix pool(3, 40);
  for (int i = 0; i < 40; ++i) pool.col(i) = Vector::Unit(3, 0) * (i % 2 ? 1.0 : -1.0);
  CHECK_THROWS_AS(select_fundamental_set(3, 2, pool), Error);
}

TEST_CASE("basis save and load round trip") {
  const HarmonicBasis basis(3, 3, Seed(8));
  std::stringstream ss;
  basis.save(ss);
  const HarmonicBasis back = HarmonicBasis::load(ss);
  const Vector x = sample_uniform_sphere(3, 1, Seed(9)).col(0);
  CHECK(back.seed() == basis.seed());
  CHECK((back.eval_upto(3, x) - basis.eval_upto(3, x)).norm() == 0.0);
  std::stringstream junk("not a basis");
  CHECK_THROWS_AS(HarmonicBasis::load(junk), Error);
}

TEST_CASE("basis cache writes and rereads files") {
  const auto dir = std::filesystem::temp_directory_path() / "rsw_cache_test";
  std::filesystem::remove_all(dir);
  setenv("RSW_CACHE_DIR", dir.c_str(), 1);
  const auto a = cached_harmonic_basis(3, 2, 99);
  CHECK(std::filesystem::exists(dir / "basis_d3_L2_s99.txt"));
  CHECK(cached_harmonic_basis(3, 2, 99) == a);
  unsetenv("RSW_CACHE_DIR");
  std::filesystem::remove_all(dir);
}

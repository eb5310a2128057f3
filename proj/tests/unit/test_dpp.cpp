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
#include <numbers>

#include "rsw/error.hpp"
#include "rsw/harmonics.hpp"
#include "rsw/quadratures.hpp"

using namespace rsw;

TEST_CASE("normalized legendre polynomials are orthonormal") {
  const int m = 4000;
  for (int a = 0; a <= 5; ++a) {
    for (int b = 0; b <= 5; ++b) {
      // Gauss-free midpoint rule on [-1, 1] with the uniform probability measure.
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        const double t = -1.0 + (i + 0.5) * 2.0 / m;
        s += legendre_normalized(a, t) * legendre_normalized(b, t) / m;
      }
      CHECK(s == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-5));
    }
  }
  // The envelope used by the OPE proposal.
  double worst = 0.0;
  for (int n = 0; n <= 30; ++n)
    for (int i = 1; i < 2000; ++i) {
      const double t = -1.0 + i / 1000.0;
      worst = std::max(worst, std::sqrt(1 - t * t) * std::pow(legendre_normalized(n, t), 2));
    }
  CHECK(worst <= 4.0 / std::numbers::pi + 1e-12);
}

TEST_CASE("harmonic ensemble kernel") {
  const ProjectionKernel k = harmonic_ensemble_kernel(3, 2);
  CHECK(k.rank == 9);
  const Matrix x = sample_uniform_sphere(3, 5, Seed(1));
  for (int i = 0; i < 5; ++i) CHECK(k.diagonal(x.col(i)) == doctest::Approx(9.0).epsilon(1e-8));
  // The projection kernel is the sum of zonal kernels up to the degree.
  double z = 0.0;
  for (int l = 0; l <= 2; ++l) z += zonal_kernel(3, l, x.col(0), x.col(1));
  CHECK(k.kernel(x.col(0), x.col(1)) == doctest::Approx(z).epsilon(1e-10));
  const ProjectionKernel k0 = harmonic_ensemble_kernel(4, 0);
  CHECK(k0.rank == 1);
  CHECK(k0.kernel(x.col(0).head(3).homogeneous().normalized(), Vector::Unit(4, 0)) == doctest::Approx(1.0));
  CHECK(harmonic_degree_for_size(3, 100) == 9);
  CHECK(harmonic_degree_for_size(3, 99) == 8);
}

TEST_CASE("harmonic ensemble sample") {
  const QuadratureNodes q = nodes_harmonic(3, 4, Seed(2));
  CHECK(q.size() == 25);
  CHECK(q.weights.sum() == doctest::Approx(1.0));
  double closest = INFINITY;
  for (int i = 0; i < q.size(); ++i)
    for (int j = i + 1; j < q.size(); ++j) closest = std::min(closest, (q.nodes.col(i) - q.nodes.col(j)).norm());
  CHECK(closest > 1e-3);
}

TEST_CASE("OPE kernel eigenfunctions are orthonormal on the box") {
  const ProjectionKernel k = ope_spherical_kernel(2, 3);
  CHECK(k.rank == 3);
  const int m = 20000;
  Matrix gram = Matrix::Zero(3, 3);
  for (int i = 0; i < m; ++i) {
    Vector u(1);
    u[0] = (i + 0.5) * 2.0 * std::numbers::pi / m;
    const Vector phi = k.eigenfunctions(u);
    gram += phi * phi.transpose() / m;
  }
  CHECK((gram - Matrix::Identity(3, 3)).norm() < 1e-6);
}

TEST_CASE("chain rule reproduces the first intensity moment") {
  // Rank-2 Legendre ensemble on [-1, 1]: E sum t_i^2 = int t^2 (1 + 3 t^2) dt / 2 = 14/15.
  const ProjectionKernel k = ope_spherical_kernel(2, 2);
  const int reps = 4000;
  double s = 0.0, s2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    const DppSample sample = sample_projection_dpp_states(k, Seed(100 + r));
    REQUIRE(sample.states.cols() == 2);
    double v = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double t = sample.states(0, i) / std::numbers::pi - 1.0;
      v += t * t;
    }
    s += v;
    s2 += v * v;
  }
  const double mean = s / reps;
  const double se = std::sqrt((s2 / reps - mean * mean) / reps);
  CHECK(std::abs(mean - 14.0 / 15.0) < 4 * se);
}

TEST_CASE("OPE nodes on the sphere") {
  const QuadratureNodes q = nodes_ope(3, 20, Seed(3));
  CHECK(q.size() == 20);
  CHECK_FALSE(q.uniform_weights);
  for (int i = 0; i < q.size(); ++i) CHECK(q.weights[i] > 0.0);
}

TEST_CASE("rejection budget is enforced") {
  ProjectionKernel k = harmonic_ensemble_kernel(3, 1);
  k.envelope = 1e-9;  // impossible envelope forces a violation
  CHECK_THROWS_AS(sample_projection_dpp_states(k, Seed(4)), Error);
  ChainRuleOptions opts;
  opts.max_proposals_per_node = 1;
  const ProjectionKernel big = harmonic_ensemble_kernel(3, 6);
  CHECK_THROWS_AS(sample_projection_dpp_states(big, Seed(5), opts), Error);
}

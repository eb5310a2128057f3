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

#include <algorithm>
#include <cmath>

#include "rsw/error.hpp"
#include "rsw/estimators.hpp"
#include "rsw/quadratures.hpp"

using namespace rsw;

namespace {

std::pair<double, double> mean_se(const Vector& x) {
  const double m = x.mean();
  const double v = (x.array() - m).square().sum() / (x.size() - 1.0);
  return {m, std::sqrt(v / x.size())};
}

DiscreteMeasure shifted_gaussian(int d, int m, double shift, double scale, Seed seed) {
  Rng rng = seed.engine();
  Matrix a(d, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < d; ++i) a(i, j) = scale * standard_normal(rng) + (i == 0 ? shift : 0.0);
  return DiscreteMeasure::uniform(a);
}

}  // namespace

TEST_CASE("plain mean") {
  const QuadratureNodes q = nodes_iid(3, 100, Seed(1));
  const Integrand one = [](DirectionRef) { return 1.0; };
  CHECK(mc_mean(one, q).value == doctest::Approx(1.0).epsilon(1e-15));
  const QuadratureNodes g = nodes_grid_circle(64, Seed(2));
  const Integrand first = [](DirectionRef x) { return x[0]; };
  CHECK(std::abs(mc_mean(first, g).value) < 1e-14);
  const Integrand f = [](DirectionRef x) { return std::exp(x[1]); };
  const EstimatorResult a = mc_mean(f, q);
  const EstimatorResult b = is_estimate(f, q.nodes, Vector::Ones(q.size()));
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-15));
  CHECK(a.evaluations == 100);
  QuadratureNodes bad = q;
  bad.weights *= 2.0;
  CHECK_THROWS_AS(mc_mean(f, bad), Error);
}

TEST_CASE("importance sampling") {
  const VmfProposal g(Vector::Unit(3, 2), 3.0);
  Rng rng = Seed(3).engine();
  const Matrix x = g.sample(200, rng);
  Vector dens(200);
  for (int i = 0; i < 200; ++i) dens[i] = g.density(x.col(i));
  const Integrand same = [&](DirectionRef y) { return g.density(y); };
  CHECK(is_estimate(same, x, dens).value == doctest::Approx(1.0).epsilon(1e-14));
  dens[4] = 0.0;
  CHECK_THROWS_AS(is_estimate(same, x, dens), Error);
}

TEST_CASE("two phase importance estimate matches the node weights") {
  const Integrand f = [](DirectionRef x) { return x[2] * x[2] + 0.1; };
  const QuadratureNodes q = nodes_isvmf(f, 3, 100, 0.2, Seed(4));
  const int pilots = static_cast<int>(q.params.at("pilots"));
  const VmfProposal g(Vector::Unit(3, 0), q.diagnostics.at("kappa"));
  // Recover the densities from the weights: w = (1 - r) / (n2 g).
  Vector dens(100 - pilots);
  for (int j = 0; j < dens.size(); ++j) dens[j] = 0.8 / (dens.size() * q.weights[pilots + j]);
  const EstimatorResult two =
      is_estimate_two_phase(f, q.nodes.leftCols(pilots), q.nodes.rightCols(100 - pilots), dens, 0.2);
  CHECK(two.value == doctest::Approx(weighted_estimate(f, q).value).epsilon(1e-12));
}

TEST_CASE("moment control variates") {
  const DiscreteMeasure mu = shifted_gaussian(3, 300, 0.0, 1.0, Seed(5));
  const ControlFamily same = cv_low(mu, mu);
  const Vector x = sample_uniform_sphere(3, 1, Seed(6)).col(0);
  CHECK(std::abs(same.eval(x)[0]) < 1e-15);

  const DiscreteMeasure nu = shifted_gaussian(3, 300, 2.0, 1.5, Seed(7));
  const ControlFamily low = cv_low(mu, nu), up = cv_up(mu, nu);
  const Matrix nodes = sample_uniform_sphere(3, 100000, Seed(8));
  for (const auto* c : {&low, &up}) {
    const Vector v = c->design(nodes).col(0);
    auto [m, se] = mean_se(v);
    CHECK(std::abs(m) < 4 * se);
  }

}

TEST_CASE("identity covariances cancel in phi_up") {
  const int d = 3;
  Matrix a(d, 2 * d);
  for (int i = 0; i < d; ++i) {
    a.col(2 * i) = Vector::Unit(d, i) * std::sqrt(d);
    a.col(2 * i + 1) = -Vector::Unit(d, i) * std::sqrt(d);
  }
  const DiscreteMeasure mu = DiscreteMeasure::uniform(a);
  REQUIRE((mu.moments().covariance - Matrix::Identity(d, d)).norm() < 1e-12);
  Matrix b = a;
  b.row(0).array() += 1.5;
  const DiscreteMeasure nu = DiscreteMeasure::uniform(b);
  const Vector x = sample_uniform_sphere(d, 1, Seed(9)).col(0);
  CHECK(cv_up(mu, nu).eval(x)[0] == doctest::Approx(cv_low(mu, nu).eval(x)[0]).epsilon(1e-12));
}

TEST_CASE("OLS control variates") {
  const QuadratureNodes q = nodes_iid(3, 200, Seed(10));
  const auto basis = cached_harmonic_basis(3, 4, 1);
  const ControlFamily sh = shcv_controls(basis, 4);
  CHECK(sh.count == 24);
  // Integrand in the span: exact recovery of the constant.
  Rng rng = Seed(11).engine();
  Vector beta(24);
  for (auto& b : beta) b = standard_normal(rng);
  const Integrand f = [&](DirectionRef x) { return 0.7 + beta.dot(basis->eval_upto(4, x)); };
  const EstimatorResult r = ols_cv_estimate(f, q, sh);
  CHECK(r.value == doctest::Approx(0.7).epsilon(1e-10));
  CHECK((r.diagnostics.coefficients - beta).norm() < 1e-8);
  CHECK(r.diagnostics.controls == 24);

  // s = 0 is the plain mean.
  ControlFamily none;
  none.count = 0;
  none.eval = [](DirectionRef) { return Vector(0); };
  const Integrand g = [](DirectionRef x) { return std::exp(x[0]); };
  CHECK(ols_cv_estimate(g, q, none).value == doctest::Approx(mc_mean(g, q).value).epsilon(1e-14));

  // Rescaled controls leave alpha unchanged.
  ControlFamily scaled = sh;
  scaled.eval = [&](DirectionRef x) {
    Vector v = basis->eval_upto(4, x);
    for (int i = 0; i < v.size(); ++i) v[i] *= (i % 3 == 0 ? 1e3 : -0.01);
    return v;
  };
  CHECK(ols_cv_estimate(g, q, scaled).value == doctest::Approx(ols_cv_estimate(g, q, sh).value).epsilon(1e-10));

  // A control inside the span of the others is dropped.
  ControlFamily extra = sh;
  extra.count = 25;
  extra.eval = [&](DirectionRef x) {
    Vector v(25);
    v.head(24) = basis->eval_upto(4, x);
    v[24] = 2.0 * v[0] - v[5];
    return v;
  };
  const EstimatorResult dep = ols_cv_estimate(g, q, extra);
  CHECK(dep.value == doctest::Approx(ols_cv_estimate(g, q, sh).value).epsilon(1e-8));
  CHECK(std::find(dep.diagnostics.flags.begin(), dep.diagnostics.flags.end(), "rank_deficient") !=
        dep.diagnostics.flags.end());

  // Too many controls.
  const QuadratureNodes small = nodes_iid(3, 25, Seed(12));
  CHECK_THROWS_AS(ols_cv_estimate(g, small, sh), Error);
  const QuadratureNodes mid = nodes_iid(3, 40, Seed(12));
  const auto flags = ols_cv_estimate(g, mid, sh).diagnostics.flags;
  CHECK(std::find(flags.begin(), flags.end(), "controls_exceed_half_nodes") != flags.end());
  CHECK_THROWS_AS(ols_cv_estimate(g, nodes_isvmf(g, 3, 100, 0.2, Seed(1)), sh), Error);
}

TEST_CASE("SHCV controls are centered and see the parity of even integrands") {
  const auto basis = cached_harmonic_basis(3, 4, 2);
  const ControlFamily sh = shcv_controls(basis, 4);
  const Matrix nodes = sample_uniform_sphere(3, 50000, Seed(13));
  const Matrix x = sh.design(nodes);
  for (int j = 0; j < sh.count; ++j) {
    auto [m, se] = mean_se(x.col(j));
    CHECK(std::abs(m) < 4 * se);
  }
  const Integrand even = [](DirectionRef y) { return std::pow(y[0] + 0.5 * y[1], 2) + std::pow(y[2], 4); };
  // Antipodal nodes make the odd and even blocks of the design orthogonal.
  QuadratureNodes q = nodes_iid(3, 2000, Seed(14));
  q.nodes.rightCols(1000) = -q.nodes.leftCols(1000);
  const EstimatorResult r = ols_cv_estimate(even, q, sh);
  // Degree-1 and degree-3 coefficients (positions 0-2 and 8-14) vanish.
  for (int j : {0, 1, 2, 8, 9, 10, 11, 12, 13, 14}) CHECK(std::abs(r.diagnostics.coefficients[j]) < 1e-8);
  CHECK_THROWS_AS(shcv_controls(basis, 5), Error);
  CHECK(shcv_default_degree(10) == 4);
  CHECK(shcv_default_degree(20) == 2);
}

TEST_CASE("repelled estimator normalization") {
  const QuadratureNodes base = nodes_iid(3, 100, Seed(15));
  const QuadratureNodes zero = repel(base, 0.0, 3.0);
  const Integrand f = [](DirectionRef x) { return x[0] > 0.0 ? 1.0 : 0.0; };
  CHECK(repelled_estimate(f, zero).value == mc_mean(f, base).value);
  const Integrand one = [](DirectionRef) { return 1.0; };
  CHECK(repelled_estimate(one, repel(base, 0.01, 3.0)).value == doctest::Approx(1.0).epsilon(1e-15));
  QuadratureNodes poisson = repel(base, 0.01, 3.0);
  poisson.intensity = 80.0;
  CHECK(repelled_estimate(one, poisson).value == doctest::Approx(100.0 / 80.0));
  CHECK_THROWS_AS(repelled_estimate(one, base), Error);
}

TEST_CASE("finalize clips negative estimates") {
  EstimatorResult r;
  r.value = -0.01;
  finalize_sw(r, 2.0);
  CHECK(r.value == 0.0);
  CHECK(r.clipped);
  r.value = 4.0;
  r.clipped = false;
  finalize_sw(r, 2.0);
  CHECK(r.sw_value == doctest::Approx(2.0));
}

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

#include "rsw/quadratures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "rsw/error.hpp"

namespace rsw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

QuadratureNodes uniform_nodes(Matrix nodes, std::string method, Seed seed) {
  QuadratureNodes q;
  const auto n = nodes.cols();
  q.nodes = std::move(nodes);
  q.weights = Vector::Constant(n, 1.0 / static_cast<double>(n));
  q.method = std::move(method);
  q.seed = seed.value();
  return q;
}

}  // namespace

QuadratureNodes nodes_iid(int d, int n, Seed seed) {
  const auto start = Clock::now();
  auto q = uniform_nodes(sample_uniform_sphere(d, n, seed), "iid", seed);
  q.generation_seconds = seconds_since(start);
  return q;
}

QuadratureNodes nodes_grid_circle(int n, Seed seed) {
  require(n >= 1, ErrorCode::invalid_argument, "grid needs n >= 1");
  const auto start = Clock::now();
  Rng rng = seed.engine();
  const double shift = -std::numbers::pi + 2.0 * std::numbers::pi * uniform01(rng);
  Matrix nodes(2, n);
  for (int k = 0; k < n; ++k) {
    const double angle = -std::numbers::pi + 2.0 * std::numbers::pi * k / n + shift;
    nodes(0, k) = std::cos(angle);
    nodes(1, k) = std::sin(angle);
  }
  auto q = uniform_nodes(std::move(nodes), "grid2d", seed);
  q.params["shift"] = shift;
  q.generation_seconds = seconds_since(start);
  return q;
}

Matrix spiral_points(int n) {
  require(n >= 1, ErrorCode::invalid_argument, "spiral needs n >= 1");
  Matrix nodes(3, n);
  const double twist = 1.8 * std::sqrt(static_cast<double>(n));
  for (int i = 1; i <= n; ++i) {
    const double z = 1.0 - (2.0 * i - 1.0) / n;
    const double polar = std::acos(z);
    const double azimuth = std::fmod(twist * polar, 2.0 * std::numbers::pi);
    const double s = std::sin(polar);
    nodes(0, i - 1) = std::cos(azimuth) * s;
    nodes(1, i - 1) = std::sin(azimuth) * s;
    nodes(2, i - 1) = z;
  }
  return nodes;
}

QuadratureNodes nodes_spiral_sphere(int n, Seed seed) {
  const auto start = Clock::now();
  auto q = uniform_nodes(apply_random_rotation(spiral_points(n), seed.child(phase::rotation)), "spiral3d", seed);
  q.generation_seconds = seconds_since(start);
  return q;
}

QuadratureNodes nodes_unifortho(int d, int n, Seed seed) {
  require(d >= 2, ErrorCode::invalid_argument, "UnifOrtho needs d >= 2");
  require(n >= 1, ErrorCode::invalid_argument, "UnifOrtho needs n >= 1");
  const auto start = Clock::now();
  Rng rng = seed.engine();
  Matrix nodes(d, n);
  for (int offset = 0; offset < n; offset += d) {
    const Matrix frame = haar_orthogonal(d, rng);
    const int take = std::min(d, n - offset);
    nodes.middleCols(offset, take) = frame.leftCols(take);
  }
  auto q = uniform_nodes(std::move(nodes), "unifortho", seed);
  q.params["frames"] = static_cast<double>((n + d - 1) / d);
  q.generation_seconds = seconds_since(start);
  return q;
}

Matrix repulsive_forces(const Matrix& nodes, double exponent, RepelStats* stats) {
  const auto n = nodes.cols();
  const auto d = nodes.rows();
  Matrix force = Matrix::Zero(d, n);
  long long dropped = 0;
  Vector diff(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      diff = nodes.col(i) - nodes.col(j);
      const double r = diff.norm();
      if (r < 1e-12) {
        ++dropped;
        continue;
      }
      const double scale = exponent == 3.0 ? 1.0 / (r * r * r) : std::pow(r, -exponent);
      force.col(i) += scale * diff;
      force.col(j) -= scale * diff;
    }
  }
  if (stats) stats->dropped_pairs += dropped;
  return force;
}

QuadratureNodes repel(const QuadratureNodes& base, double epsilon, double exponent, RepelStats* stats) {
  require(base.size() >= 2, ErrorCode::invalid_argument, "repulsion needs at least two nodes");
  require(epsilon >= 0.0 && std::isfinite(epsilon), ErrorCode::invalid_argument, "repulsion step must be >= 0");
  require(exponent > 0.0, ErrorCode::invalid_argument, "force exponent must be > 0");
  const auto start = Clock::now();
  QuadratureNodes out = base;
  if (epsilon > 0.0) {
    RepelStats local;
    const Matrix force = repulsive_forces(base.nodes, exponent, &local);
    for (int i = 0; i < out.size(); ++i) {
      Vector moved = base.nodes.col(i) + epsilon * force.col(i);
      const double norm = moved.norm();
      // A node pushed exactly through the origin keeps its position.
      if (norm > 0.0) out.nodes.col(i) = moved / norm;
    }
    out.diagnostics["dropped_pairs"] = static_cast<double>(local.dropped_pairs);
    if (stats) stats->dropped_pairs += local.dropped_pairs;
  }
  out.method = "repelled:" + base.method;
  out.params["epsilon"] = epsilon;
  out.params["exponent"] = exponent;
  out.generation_seconds = base.generation_seconds + seconds_since(start);
  return out;
}

double vmf_log_partition(int d, double kappa) {
  require(d >= 2, ErrorCode::invalid_argument, "vMF needs d >= 2");
  require(kappa >= 0.0, ErrorCode::invalid_argument, "vMF concentration must be >= 0");
  if (kappa < 1e-10) return 0.0;
  const double nu = 0.5 * d - 1.0;
  double log_bessel = 0.0;
  if (kappa <= 500.0) {
    log_bessel = std::log(boost::math::cyl_bessel_i(nu, kappa));
  } else {
    // Large-argument expansion of I_nu.
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 30; ++k) {
      const double next = -term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * kappa);
      if (std::abs(next) >= std::abs(term)) break;
      term = next;
      sum += term;
      if (std::abs(term) < 1e-17) break;
    }
    log_bessel = kappa - 0.5 * std::log(2.0 * std::numbers::pi * kappa) + std::log(sum);
  }
  return std::lgamma(0.5 * d) + (1.0 - 0.5 * d) * std::log(0.5 * kappa) + log_bessel;
}

namespace {

double sample_gamma(double shape, Rng& rng) {
  if (shape < 1.0) {
    const double u = uniform01(rng);
    return sample_gamma(shape + 1.0, rng) * std::pow(u > 0.0 ? u : 0x1.0p-53, 1.0 / shape);
  }
  const double dd = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * dd);
  for (;;) {
    const double x = standard_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform01(rng);
    if (u > 0.0 && std::log(u) < 0.5 * x * x + dd - dd * v + dd * std::log(v)) return dd * v;
  }
}

double sample_beta_symmetric(double a, Rng& rng) {
  const double x = sample_gamma(a, rng);
  const double y = sample_gamma(a, rng);
  return x / (x + y);
}

}  // namespace

double sample_vmf_cosine(int d, double kappa, Rng& rng) {
  require(d >= 2, ErrorCode::invalid_argument, "vMF needs d >= 2");
  require(kappa >= 0.0, ErrorCode::invalid_argument, "vMF concentration must be >= 0");
  const double m = d - 1.0;
  const double b = m / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + m * m));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + m * std::log(1.0 - x0 * x0);
  for (;;) {
    const double z = sample_beta_symmetric(0.5 * m, rng);
    const double w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = uniform01(rng);
    if (u > 0.0 && kappa * w + m * std::log(1.0 - x0 * w) - c >= std::log(u)) return std::clamp(w, -1.0, 1.0);
  }
}

VmfProposal::VmfProposal(Vector direction, double kappa)
    : direction_(UnitVector::normalize(std::move(direction)).coords()), kappa_(kappa) {
  require(kappa_ >= 0.0 && std::isfinite(kappa_), ErrorCode::invalid_argument, "vMF concentration must be >= 0");
  log_partition_ = vmf_log_partition(dim(), kappa_);
}

double VmfProposal::component_density(DirectionRef x, bool flipped) const {
  const double t = direction_.dot(x);
  return std::exp((flipped ? -kappa_ : kappa_) * t - log_partition_);
}

double VmfProposal::density(DirectionRef x) const {
  const double t = std::abs(direction_.dot(x));
  // 1/2 (e^{k t} + e^{-k t}) e^{-log C}, written to avoid overflow.
  return 0.5 * std::exp(kappa_ * t - log_partition_) * (1.0 + std::exp(-2.0 * kappa_ * t));
}

Matrix VmfProposal::sample(int n, Rng& rng) const {
  require(n >= 0, ErrorCode::invalid_argument, "negative sample count");
  const int d = dim();
  Matrix out(d, n);
  Vector tangent(d);
  for (int j = 0; j < n; ++j) {
    const double w = sample_vmf_cosine(d, kappa_, rng);
    double tn = 0.0;
    do {
      for (int i = 0; i < d; ++i) tangent[i] = standard_normal(rng);
      tangent -= tangent.dot(direction_) * direction_;
      tn = tangent.norm();
    } while (tn < 1e-12);
    tangent /= tn;
    const double sign = uniform01(rng) < 0.5 ? 1.0 : -1.0;
    out.col(j) = sign * (w * direction_ + std::sqrt(std::max(0.0, 1.0 - w * w)) * tangent);
    out.col(j).normalize();
  }
  return out;
}

double kappa_from_resultant(double resultant, int d, double kappa_max) {
  require(resultant >= 0.0, ErrorCode::invalid_argument, "resultant length must be >= 0");
  if (resultant >= 1.0 - 1e-9) return kappa_max;
  const double r2 = resultant * resultant;
  return std::min(kappa_max, resultant * (d - r2) / (1.0 - r2));
}

QuadratureNodes nodes_isvmf(const Integrand& f, int d, int n, double budget_fraction, Seed seed,
                            const IsvmfOptions& opts) {
  require(budget_fraction > 0.0 && budget_fraction < 1.0, ErrorCode::invalid_argument,
          "budget fraction must lie in (0, 1)");
  require(n >= 2, ErrorCode::invalid_argument, "ISVMF needs n >= 2");
  const int pilots = static_cast<int>(std::floor(budget_fraction * n));
  require(pilots >= 1, ErrorCode::invalid_argument, "budget fraction leaves no pilot evaluations");
  const int proposals = n - pilots;
  const auto start = Clock::now();

  const Matrix pilot_nodes = sample_uniform_sphere(d, pilots, seed.child(phase::pilot));
  Vector values(pilots);
  for (int i = 0; i < pilots; ++i) {
    values[i] = f(pilot_nodes.col(i));
    require(values[i] >= 0.0, ErrorCode::invalid_argument, "ISVMF integrand must be nonnegative");
  }
  Eigen::Index imax = 0;
  values.maxCoeff(&imax);

  // Fold onto the hemisphere of the best pilot.
  Vector resultant = Vector::Zero(d);
  double mass = 0.0;
  for (int i = 0; i < pilots; ++i) {
    if (pilot_nodes.col(imax).dot(pilot_nodes.col(i)) > 0.0) {
      resultant += values[i] * pilot_nodes.col(i);
      mass += values[i];
    }
  }

  bool fallback = false;
  Vector direction = Vector::Unit(d, 0);
  double ratio = 0.0;
  double kappa = 0.0;
  if (mass > 0.0 && resultant.norm() > 0.0) {
    direction = resultant / resultant.norm();
    ratio = resultant.norm() / mass;
    kappa = kappa_from_resultant(ratio, d, opts.kappa_max);
  } else {
    fallback = true;
  }
  const VmfProposal proposal(direction, kappa);
  Rng rng = seed.child(phase::proposal).engine();
  const Matrix drawn = fallback ? sample_uniform_sphere(d, proposals, rng) : proposal.sample(proposals, rng);

  QuadratureNodes q;
  q.nodes.resize(d, n);
  q.nodes.leftCols(pilots) = pilot_nodes;
  q.nodes.rightCols(proposals) = drawn;
  q.weights.resize(n);
  q.weights.head(pilots).setConstant(budget_fraction / pilots);
  for (int j = 0; j < proposals; ++j) {
    const double g = fallback ? 1.0 : proposal.density(drawn.col(j));
    q.weights[pilots + j] = (1.0 - budget_fraction) / (proposals * g);
  }
  q.method = "isvmf";
  q.seed = seed.value();
  q.uniform_weights = false;
  q.params["budget_fraction"] = budget_fraction;
  q.params["pilots"] = pilots;
  q.diagnostics["kappa"] = kappa;
  q.diagnostics["resultant"] = ratio;
  q.diagnostics["fallback_uniform"] = fallback ? 1.0 : 0.0;
  q.generation_seconds = seconds_since(start);
  return q;
}

QuadratureNodes sample_spherical_ensemble(int n, Seed seed) {
  require(n >= 1, ErrorCode::invalid_argument, "spherical ensemble needs n >= 1");
  const auto start = Clock::now();
  constexpr int kMaxRetries = 3;
  using cd = std::complex<double>;
  std::vector<cd> a(static_cast<std::size_t>(n) * n);
  std::vector<cd> b(a.size());
  std::vector<cd> alpha(static_cast<std::size_t>(n));
  std::vector<cd> beta(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    Rng rng = (attempt == 0 ? seed : seed.child(phase::retry).child(static_cast<std::uint64_t>(attempt))).engine();
    const double scale = std::sqrt(0.5);
    for (auto& z : a) z = {scale * standard_normal(rng), scale * standard_normal(rng)};
    for (auto& z : b) z = {scale * standard_normal(rng), scale * standard_normal(rng)};
    double norm_a = 0.0;
    for (const auto& z : a) norm_a += std::norm(z);
    norm_a = std::sqrt(norm_a);

    // Pencil (B, A): B v = lambda A v, i.e. eigenvalues of A^{-1} B.
    const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', n, b.data(), n, a.data(), n, alpha.data(),
                                          beta.data(), nullptr, 1, nullptr, 1);
    if (info != 0) continue;
    bool singular = false;
    for (const auto& bt : beta) singular |= std::abs(bt) < 1e-12 * norm_a;
    if (singular) continue;

    Matrix nodes(3, n);
    for (int i = 0; i < n; ++i) {
      const cd lambda = alpha[static_cast<std::size_t>(i)] / beta[static_cast<std::size_t>(i)];
      nodes.col(i) = stereographic_inverse(lambda).coords();
    }
    auto q = uniform_nodes(std::move(nodes), "spherical", seed);
    q.diagnostics["retries"] = attempt;
    q.generation_seconds = seconds_since(start);
    return q;
  }
  fail(ErrorCode::numerical, "spherical ensemble: Ginibre pencil singular after retries");
}

QuadratureNodes sample_cue_circle(int n, Seed seed) {
  require(n >= 1, ErrorCode::invalid_argument, "CUE needs n >= 1");
  const auto start = Clock::now();
  Rng rng = seed.engine();
  const Eigen::MatrixXcd u = haar_unitary(n, rng);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, false);
  require(solver.info() == Eigen::Success, ErrorCode::numerical, "CUE eigen-decomposition failed");
  Matrix nodes(2, n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = solver.eigenvalues()[i];
    worst = std::max(worst, std::abs(std::abs(z) - 1.0));
    const double angle = std::arg(z);
    nodes(0, i) = std::cos(angle);
    nodes(1, i) = std::sin(angle);
  }
  auto q = uniform_nodes(std::move(nodes), "cue", seed);
  q.diagnostics["max_modulus_error"] = worst;
  q.generation_seconds = seconds_since(start);
  return q;
}

}  // namespace rsw

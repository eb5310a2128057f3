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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <vector>

#include "rsw/error.hpp"
#include "rsw/harmonics.hpp"
#include "rsw/quadratures.hpp"

namespace rsw {

namespace {

using Clock = std::chrono::steady_clock;

}  // namespace

DppSample sample_projection_dpp_states(const ProjectionKernel& kernel, Seed seed, const ChainRuleOptions& opts) {
  const int n = kernel.rank;
  require(n >= 1, ErrorCode::invalid_argument, "projection kernel rank must be >= 1");
  require(static_cast<bool>(kernel.sample_proposal) && static_cast<bool>(kernel.proposal_density) &&
              kernel.envelope > 0.0,
          ErrorCode::invalid_argument, "projection kernel lacks a proposal sampler or envelope");
  const bool use_features = static_cast<bool>(kernel.eigenfunctions);
  require(use_features || static_cast<bool>(kernel.kernel), ErrorCode::invalid_argument,
          "projection kernel needs a kernel or eigenfunction evaluator");

  Rng rng = seed.engine();
  DppSample out;
  out.states.resize(kernel.state_dim, n);
  Matrix factor = Matrix::Zero(n, n);  // Cholesky factor of the Gram of accepted points
  Matrix features;                     // eigenfunction values of accepted points, rank x k
  if (use_features) features.resize(n, n);
  Vector cross(n);

  for (int k = 0; k < n; ++k) {
    long long tries = 0;
    for (;;) {
      if (++tries > opts.max_proposals_per_node)
        fail(ErrorCode::budget_exceeded, "chain rule: rejection budget exceeded at node " + std::to_string(k + 1) +
                                             " of " + std::to_string(n) + " (" + kernel.name + ")");
      const Vector x = kernel.sample_proposal(rng);
      const double q = kernel.proposal_density(x);
      double diag = 0.0;
      Vector phi;
      if (use_features) {
        phi = kernel.eigenfunctions(x);
        diag = phi.squaredNorm();
        if (k > 0) cross.head(k).noalias() = features.leftCols(k).transpose() * phi;
      } else {
        diag = kernel.diagonal(x);
        for (int j = 0; j < k; ++j) cross[j] = kernel.kernel(x, out.states.col(j));
      }
      auto w = cross.head(k);
      factor.topLeftCorner(k, k).triangularView<Eigen::Lower>().solveInPlace(w);
      double conditional = diag - w.squaredNorm();
      if (conditional < -opts.negative_tol * std::max(1.0, diag))
        fail(ErrorCode::numerical, "chain rule: negative conditional density (" + kernel.name + ")");
      conditional = std::max(0.0, conditional);
      if (conditional > diag + 1e-10 * std::max(1.0, diag))
        fail(ErrorCode::internal, "chain rule: conditional density exceeds the kernel diagonal");
      const double ratio = conditional / (kernel.envelope * q);
      if (ratio > 1.0 + 1e-10)
        fail(ErrorCode::numerical, "chain rule: rejection envelope violated (" + kernel.name + ")");
      if (uniform01(rng) < ratio) {
        out.states.col(k) = x;
        factor.row(k).head(k) = w.transpose();
        factor(k, k) = std::sqrt(conditional);
        if (use_features) features.col(k) = phi;
        break;
      }
    }
    out.proposals += tries;
  }
  return out;
}

QuadratureNodes sample_projection_dpp(const ProjectionKernel& kernel, Seed seed, const ChainRuleOptions& opts) {
  const auto start = Clock::now();
  const DppSample sample = sample_projection_dpp_states(kernel, seed, opts);
  const int n = kernel.rank;
  QuadratureNodes q;
  q.method = kernel.name;
  q.seed = seed.value();
  q.weights.resize(n);
  if (kernel.to_sphere) {
    for (int i = 0; i < n; ++i) {
      const SphericalPoint p = kernel.to_sphere(sample.states.col(i));
      if (i == 0) q.nodes.resize(p.point.size(), n);
      q.nodes.col(i) = p.point;
      // E sum g(x_i) / K(x_i, x_i) = int g for a projection DPP.
      q.weights[i] = p.jacobian / kernel.diagonal(sample.states.col(i));
    }
    q.uniform_weights = false;
  } else {
    q.nodes = sample.states;
    q.weights.setConstant(1.0 / n);
  }
  q.diagnostics["proposals"] = static_cast<double>(sample.proposals);
  q.generation_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return q;
}

ProjectionKernel harmonic_ensemble_kernel(int d, int max_degree, int max_rank) {
  require(d >= 2, ErrorCode::invalid_argument, "harmonic ensemble needs d >= 2");
  require(max_degree >= 0, ErrorCode::invalid_argument, "harmonic ensemble degree must be >= 0");
  const long long rank = harmonic_cumulative_dim(d, max_degree);
  require(rank <= max_rank, ErrorCode::invalid_argument,
          "harmonic ensemble rank " + std::to_string(rank) + " exceeds the configured maximum");
  const double a = 0.5 * (d - 1);
  const double b = a - 1.0;
  const double scale = static_cast<double>(rank) / binomial_real(a, max_degree);
  const double pi_l = static_cast<double>(rank);

  ProjectionKernel k;
  k.rank = static_cast<int>(rank);
  k.state_dim = d;
  k.name = "harmonic:" + std::to_string(max_degree);
  k.kernel = [=](DirectionRef x, DirectionRef y) {
    return scale * jacobi_eval(max_degree, a, b, std::clamp(x.dot(y), -1.0, 1.0));
  };
  k.diagonal = [pi_l](DirectionRef) { return pi_l; };
  k.sample_proposal = [d](Rng& rng) -> Vector { return sample_uniform_sphere(d, 1, rng).col(0); };
  k.proposal_density = [](DirectionRef) { return 1.0; };
  k.envelope = pi_l;

  const Vector e = Vector::Unit(d, 0);
  require(std::abs(k.kernel(e, e) - pi_l) <= 1e-8 * std::max(1.0, pi_l), ErrorCode::numerical,
          "harmonic kernel diagonal disagrees with pi_L");
  return k;
}

int harmonic_degree_for_size(int d, int n) {
  require(n >= 1, ErrorCode::invalid_argument, "harmonic ensemble size must be >= 1");
  int l = 0;
  while (harmonic_cumulative_dim(d, l + 1) <= n) ++l;
  return l;
}

double legendre_normalized(int degree, double t) {
  require(degree >= 0, ErrorCode::invalid_argument, "Legendre degree must be >= 0");
  if (degree == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int n = 2; n <= degree; ++n) {
    const double next = ((2.0 * n - 1.0) * t * cur - (n - 1.0) * prev) / n;
    prev = cur;
    cur = next;
  }
  return std::sqrt(2.0 * degree + 1.0) * cur;
}

namespace {

/// First n multi-indices in `vars` variables, by total degree then lexicographically.
std::vector<std::vector<int>> graded_lex_indices(int vars, int n) {
  std::vector<std::vector<int>> out;
  for (int total = 0; static_cast<int>(out.size()) < n; ++total) {
    std::vector<std::vector<int>> level;
    std::vector<int> idx(static_cast<std::size_t>(vars), 0);
    // Enumerate compositions of `total` into `vars` parts in lexicographic order (descending first part).
    auto rec = [&](auto&& self, int pos, int left) -> void {
      if (pos == vars - 1) {
        idx[static_cast<std::size_t>(pos)] = left;
        level.push_back(idx);
        return;
      }
      for (int v = left; v >= 0; --v) {
        idx[static_cast<std::size_t>(pos)] = v;
        self(self, pos + 1, left - v);
      }
    };
    rec(rec, 0, total);
    for (auto& m : level) {
      if (static_cast<int>(out.size()) == n) break;
      out.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace

ProjectionKernel ope_spherical_kernel(int d, int n) {
  require(d >= 2, ErrorCode::invalid_argument, "OPE needs d >= 2");
  require(n >= 1, ErrorCode::invalid_argument, "OPE rank must be >= 1");
  const int vars = d - 1;
  const Vector upper = coordinate_box_upper(d);
  const auto indices = graded_lex_indices(vars, n);
  int max_deg = 0;
  for (const auto& m : indices)
    for (int v : m) max_deg = std::max(max_deg, v);

  auto features = [=](DirectionRef u) -> Vector {
    Matrix table(max_deg + 1, vars);
    for (int k = 0; k < vars; ++k) {
      const double t = 2.0 * u[k] / upper[k] - 1.0;
      for (int j = 0; j <= max_deg; ++j) table(j, k) = legendre_normalized(j, t);
    }
    Vector phi(n);
    for (int i = 0; i < n; ++i) {
      double v = 1.0;
      for (int k = 0; k < vars; ++k) v *= table(indices[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], k);
      phi[i] = v;
    }
    return phi;
  };

  ProjectionKernel k;
  k.rank = n;
  k.state_dim = vars;
  k.name = "ope";
  k.eigenfunctions = features;
  k.kernel = [features](DirectionRef x, DirectionRef y) { return features(x).dot(features(y)); };
  k.diagonal = [features](DirectionRef x) { return features(x).squaredNorm(); };
  // Product arcsine proposal in the rescaled coordinates t = 2u/b - 1. With
  // p_j(t)^2 sqrt(1 - t^2) <= 4/pi for the orthonormal Legendre polynomials,
  // K(u, u) <= n 2^vars q(u).
  k.sample_proposal = [=](Rng& rng) -> Vector {
    Vector u(vars);
    for (int i = 0; i < vars; ++i) {
      double t = 1.0;
      while (std::abs(t) >= 1.0) t = std::cos(std::numbers::pi * uniform01(rng));
      u[i] = 0.5 * (t + 1.0) * upper[i];
    }
    return u;
  };
  k.proposal_density = [=](DirectionRef u) {
    double q = 1.0;
    for (int i = 0; i < vars; ++i) {
      const double t = 2.0 * u[i] / upper[i] - 1.0;
      q *= 2.0 / (std::numbers::pi * std::sqrt(std::max(1e-300, 1.0 - t * t)));
    }
    return q;
  };
  k.envelope = n * std::pow(2.0, vars);
  k.to_sphere = [](DirectionRef u) { return spherical_coords_map(Vector(u)); };
  return k;
}

QuadratureNodes nodes_harmonic(int d, int max_degree, Seed seed) {
  auto q = sample_projection_dpp(harmonic_ensemble_kernel(d, max_degree), seed);
  q.params["degree"] = max_degree;
  return q;
}

QuadratureNodes nodes_ope(int d, int n, Seed seed) { return sample_projection_dpp(ope_spherical_kernel(d, n), seed); }

}  // namespace rsw

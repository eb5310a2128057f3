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
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "rsw/nodes.hpp"
#include "rsw/rng.hpp"
#include "rsw/sphere.hpp"

namespace rsw {

// ---------------------------------------------------------------------------
// Classical and randomized-grid node sets. All weights are 1/N.

QuadratureNodes nodes_iid(int d, int n, Seed seed);

/// Randomly shifted regular grid on S^1.
QuadratureNodes nodes_grid_circle(int n, Seed seed);

/// Generalized spiral points on S^2 before the random rotation.
Matrix spiral_points(int n);
/// Generalized spiral points with one shared Haar rotation.
QuadratureNodes nodes_spiral_sphere(int n, Seed seed);

/// floor(n/d) independent Haar frames plus the first n mod d columns of one
/// more independent frame.
QuadratureNodes nodes_unifortho(int d, int n, Seed seed);

// ---------------------------------------------------------------------------
// Repelled configurations.

struct RepelStats {
  long long dropped_pairs = 0;
};

/// One simultaneous Coulomb step x -> (x + eps F(x)) / |x + eps F(x)| with
/// F(x) = sum_{y != x} (x - y) / |x - y|^s. Weights and metadata are kept.
QuadratureNodes repel(const QuadratureNodes& base, double epsilon, double exponent, RepelStats* stats = nullptr);

/// Repulsive force on every node of the configuration (columns of the result).
Matrix repulsive_forces(const Matrix& nodes, double exponent, RepelStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Fitted importance sampling with a symmetrized von Mises-Fisher proposal.

/// log of E_unif[exp(kappa <e, X>)] for X uniform on S^{d-1}.
double vmf_log_partition(int d, double kappa);

/// Cosine <mu, X> for X ~ vMF(mu, kappa) on S^{d-1} (Wood's rejection sampler).
double sample_vmf_cosine(int d, double kappa, Rng& rng);

class VmfProposal {
 public:
  VmfProposal(Vector direction, double kappa);

  const Vector& direction() const { return direction_; }
  double kappa() const { return kappa_; }
  int dim() const { return static_cast<int>(direction_.size()); }

  /// Density of 1/2 vmf(e, kappa) + 1/2 vmf(-e, kappa) relative to the
  /// uniform probability measure on the sphere.
  double density(DirectionRef x) const;
  /// Single-component density vmf(x | e, kappa), same reference measure.
  double component_density(DirectionRef x, bool flipped) const;

  Matrix sample(int n, Rng& rng) const;

 private:
  Vector direction_;
  double kappa_;
  double log_partition_;
};

/// kappa = R (d - R^2) / (1 - R^2), with R capped below 1.
double kappa_from_resultant(double resultant, int d, double kappa_max = 1e4);

struct IsvmfOptions {
  double kappa_max = 1e4;
};

/// Two-phase fitted importance sampling: floor(rN) uniform pilots fit the
/// proposal, the rest of the budget is drawn from it. Weights reproduce the
/// combined estimator exactly: r/n1 on pilots, (1-r)/(n2 g(x)) on proposals.
QuadratureNodes nodes_isvmf(const Integrand& f, int d, int n, double budget_fraction, Seed seed,
                            const IsvmfOptions& opts = {});

// ---------------------------------------------------------------------------
// Random-matrix DPPs.

/// Spherical ensemble on S^2: generalized eigenvalues of (B, A) for complex
/// Ginibre A, B, lifted by inverse stereographic projection.
QuadratureNodes sample_spherical_ensemble(int n, Seed seed);

/// Eigenvalue phases of a Haar unitary, on S^1.
QuadratureNodes sample_cue_circle(int n, Seed seed);

// ---------------------------------------------------------------------------
// Projection DPPs through the chain rule.

/// N-dimensional projection kernel with a reference measure on a state space
/// (the sphere or a coordinate box) and a rejection envelope.
struct ProjectionKernel {
  int rank = 0;
  int state_dim = 0;  // dimension of state vectors
  std::string name;
  std::function<double(DirectionRef, DirectionRef)> kernel;
  std::function<double(DirectionRef)> diagonal;
  /// Proposal sampler and its density relative to the reference measure.
  std::function<Vector(Rng&)> sample_proposal;
  std::function<double(DirectionRef)> proposal_density;
  /// K(x, x) <= envelope * proposal_density(x) for all x.
  double envelope = 0.0;
  /// Maps a state to a sphere point and the change-of-variables weight
  /// (density of the reference image relative to uniform on the sphere).
  /// Absent when the state space is the sphere itself.
  std::function<SphericalPoint(DirectionRef)> to_sphere;
  /// Optional eigenfunction evaluator (phi_k(x))_k.
  std::function<Vector(DirectionRef)> eigenfunctions;
};

struct ChainRuleOptions {
  long long max_proposals_per_node = 1000000;
  double negative_tol = 1e-8;
};

struct DppSample {
  Matrix states;  // state_dim x rank
  long long proposals = 0;
};

/// Exact HKPV chain rule with rejection sampling.
DppSample sample_projection_dpp_states(const ProjectionKernel& kernel, Seed seed, const ChainRuleOptions& opts = {});

/// Chain-rule sample mapped to quadrature nodes on the sphere. Weights are
/// 1/N for sphere kernels and jacobian/N for coordinate-box kernels.
QuadratureNodes sample_projection_dpp(const ProjectionKernel& kernel, Seed seed, const ChainRuleOptions& opts = {});

/// K(x, y) = pi_L / binom(L + (d-1)/2, L) P_L^{((d-1)/2, (d-1)/2 - 1)}(<x, y>).
ProjectionKernel harmonic_ensemble_kernel(int d, int max_degree, int max_rank = 20000);

/// Largest L with pi_L <= n (used when a harmonic ensemble is requested by size).
int harmonic_degree_for_size(int d, int n);

/// Orthonormal Legendre polynomial sqrt(2n+1) P_n(t) on [-1, 1].
double legendre_normalized(int degree, double t);

/// Product-Legendre projection kernel of rank n on the coordinate box of
/// S^{d-1}, with multi-indices in graded lexicographic order.
ProjectionKernel ope_spherical_kernel(int d, int n);

QuadratureNodes nodes_harmonic(int d, int max_degree, Seed seed);
QuadratureNodes nodes_ope(int d, int n, Seed seed);

// ---------------------------------------------------------------------------
// Registry.

/// Parsed node-generation method, e.g. "iid", "repelled:unifortho", "harmonic:4".
struct MethodSpec {
  std::string name;
  std::string base;  // inner method for repelled:<base>
  std::optional<int> degree;
  std::optional<double> epsilon;   // repelled step, default 1/N
  std::optional<double> exponent;  // repelled force exponent, default d
  double budget_fraction = 0.2;    // isvmf pilot fraction

  static MethodSpec parse(const std::string& text);
  std::string to_string() const;
  /// True for methods whose nodes target the uniform measure with 1/N weights.
  bool uniform_target() const;
};

/// Generates nodes for a registry method. `f` is required by integrand-aware
/// methods (isvmf) and ignored otherwise.
QuadratureNodes generate_nodes(const MethodSpec& spec, int d, int n, Seed seed, const Integrand* f = nullptr);

}  // namespace rsw

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

#include "rsw/estimators.hpp"

#include <chrono>
#include <cmath>
#include <utility>

#include <Eigen/QR>

#include "rsw/error.hpp"

namespace rsw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

}  // namespace

Vector evaluate(const Integrand& f, const Matrix& nodes) {
  Vector v(nodes.cols());
  for (Eigen::Index i = 0; i < nodes.cols(); ++i) v[i] = f(nodes.col(i));
  return v;
}

EstimatorResult weighted_estimate(const Integrand& f, const QuadratureNodes& q) {
  validate_nodes(q);
  const auto start = Clock::now();
  EstimatorResult r;
  for (int i = 0; i < q.size(); ++i) r.value += q.weights[i] * f(q.nodes.col(i));
  r.sw_value = r.value;
  r.evaluations = q.size();
  r.wall_seconds = seconds_since(start);
  return r;
}

EstimatorResult mc_mean(const Integrand& f, const QuadratureNodes& q) {
  require(std::abs(q.weights.sum() - 1.0) <= 1e-9, ErrorCode::invalid_argument, "node weights must sum to 1");
  return weighted_estimate(f, q);
}

EstimatorResult is_estimate(const Integrand& f, const Matrix& nodes, const Vector& densities) {
  require(nodes.cols() == densities.size(), ErrorCode::dimension_mismatch, "one density value per node");
  require(nodes.cols() > 0, ErrorCode::invalid_argument, "no nodes");
  const auto start = Clock::now();
  const double n = static_cast<double>(nodes.cols());
  EstimatorResult r;
  for (Eigen::Index i = 0; i < nodes.cols(); ++i) {
    require(densities[i] > 0.0 && std::isfinite(densities[i]), ErrorCode::invalid_argument,
            "proposal density must be positive at every node");
    r.value += f(nodes.col(i)) / (n * densities[i]);
  }
  r.sw_value = r.value;
  r.evaluations = nodes.cols();
  r.wall_seconds = seconds_since(start);
  return r;
}

EstimatorResult is_estimate_two_phase(const Integrand& f, const Matrix& pilots, const Matrix& proposals,
                                      const Vector& densities, double budget_fraction) {
  require(budget_fraction > 0.0 && budget_fraction < 1.0, ErrorCode::invalid_argument,
          "budget fraction must lie in (0, 1)");
  require(pilots.cols() > 0, ErrorCode::invalid_argument, "no pilot nodes");
  const auto start = Clock::now();
  double pilot_mean = 0.0;
  for (Eigen::Index i = 0; i < pilots.cols(); ++i) pilot_mean += f(pilots.col(i));
  pilot_mean /= static_cast<double>(pilots.cols());
  EstimatorResult r = is_estimate(f, proposals, densities);
  r.value = budget_fraction * pilot_mean + (1.0 - budget_fraction) * r.value;
  r.sw_value = r.value;
  r.evaluations += pilots.cols();
  r.wall_seconds = seconds_since(start);
  return r;
}

Matrix ControlFamily::design(const Matrix& nodes) const {
  Matrix x(nodes.cols(), count);
  for (Eigen::Index i = 0; i < nodes.cols(); ++i) x.row(i) = eval(nodes.col(i)).transpose();
  return x;
}

ControlFamily cv_low(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require(mu.dim() == nu.dim(), ErrorCode::dimension_mismatch, "measures differ in dimension");
  require(mu.dim() >= 2, ErrorCode::invalid_argument, "control variates need d >= 2");
  const Vector dm = mu.moments().mean - nu.moments().mean;
  const double offset = dm.squaredNorm() / mu.dim();
  ControlFamily c;
  c.tag = "low";
  c.count = 1;
  c.eval = [dm, offset](DirectionRef x) {
    const double t = x.dot(dm);
    return Vector::Constant(1, t * t - offset);
  };
  return c;
}

ControlFamily cv_up(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require(mu.dim() == nu.dim(), ErrorCode::dimension_mismatch, "measures differ in dimension");
  require(mu.dim() >= 2, ErrorCode::invalid_argument, "control variates need d >= 2");
  const MeasureMoments a = mu.moments();
  const MeasureMoments b = nu.moments();
  const Vector dm = a.mean - b.mean;
  const Matrix cov = a.covariance + b.covariance;
  const double offset = (dm.squaredNorm() + a.trace + b.trace) / mu.dim();
  ControlFamily c;
  c.tag = "up";
  c.count = 1;
  c.eval = [dm, cov, offset](DirectionRef x) {
    const double t = x.dot(dm);
    return Vector::Constant(1, t * t + x.dot(cov * x) - offset);
  };
  return c;
}

ControlFamily shcv_controls(std::shared_ptr<const HarmonicBasis> basis, int max_degree) {
  require(basis != nullptr, ErrorCode::invalid_argument, "missing harmonic basis");
  require(max_degree >= 1, ErrorCode::invalid_argument, "SHCV degree must be >= 1");
  require(basis->max_degree() >= max_degree, ErrorCode::invalid_argument,
          "harmonic basis does not cover the requested degree");
  ControlFamily c;
  c.tag = "sh:" + std::to_string(max_degree);
  c.count = static_cast<int>(basis->cumulative_size(max_degree) - 1);
  c.eval = [basis, max_degree](DirectionRef x) { return basis->eval_upto(max_degree, x); };
  return c;
}

int shcv_default_degree(int d) { return d <= 10 ? 4 : 2; }

EstimatorResult ols_cv_fit(const Vector& values, const Matrix& design, const OlsOptions& opts) {
  const Eigen::Index n = values.size();
  const Eigen::Index s = design.cols();
  require(design.rows() == n, ErrorCode::dimension_mismatch, "design rows must match the node count");
  require(n > s + 1, ErrorCode::invalid_argument,
          "control-variate fit needs more nodes than controls plus one (N=" + std::to_string(n) +
              ", s=" + std::to_string(s) + ")");
  const auto start = Clock::now();
  EstimatorResult r;
  r.evaluations = n;
  r.diagnostics.controls = static_cast<int>(s);
  const double fbar = values.mean();
  if (s == 0) {
    r.value = fbar;
    r.sw_value = fbar;
    r.diagnostics.rank = 1;
    r.wall_seconds = seconds_since(start);
    return r;
  }
  if (2 * s > n) r.diagnostics.flags.push_back("controls_exceed_half_nodes");

  // Centering removes the intercept column; alpha follows from the means.
  const Eigen::RowVectorXd phibar = design.colwise().mean();
  const Matrix centered = design.rowwise() - phibar;
  const Vector fc = values.array() - fbar;
  Eigen::ColPivHouseholderQR<Matrix> qr(centered);
  qr.setThreshold(opts.rank_tol);
  const Vector beta = qr.solve(fc);
  const int rank = static_cast<int>(qr.rank());
  if (rank < s) r.diagnostics.flags.push_back("rank_deficient");

  const auto diag = qr.matrixQR().diagonal().head(std::max(rank, 1)).cwiseAbs();
  r.diagnostics.condition_number = diag.minCoeff() > 0.0 ? diag.maxCoeff() / diag.minCoeff() : INFINITY;
  r.diagnostics.rank = rank + 1;
  r.diagnostics.coefficients = beta;
  r.value = fbar - phibar.dot(beta);
  r.sw_value = r.value;
  r.wall_seconds = seconds_since(start);
  return r;
}

EstimatorResult ols_cv_estimate(const Integrand& f, const QuadratureNodes& q, const ControlFamily& controls,
                                const OlsOptions& opts) {
  validate_nodes(q);
  require(q.uniform_weights, ErrorCode::invalid_argument, "control variates need uniformly weighted nodes");
  const auto start = Clock::now();
  const Vector values = evaluate(f, q.nodes);
  const Matrix design = controls.design(q.nodes);
  EstimatorResult r = ols_cv_fit(values, design, opts);
  r.wall_seconds = seconds_since(start);
  return r;
}

EstimatorResult repelled_estimate(const Integrand& f, const QuadratureNodes& q) {
  require(q.params.count("epsilon") > 0, ErrorCode::invalid_argument, "nodes were not produced by repel");
  const auto start = Clock::now();
  EstimatorResult r;
  if (q.intensity) {
    require(*q.intensity > 0.0, ErrorCode::invalid_argument, "base intensity must be positive");
    for (int i = 0; i < q.size(); ++i) r.value += f(q.nodes.col(i));
    r.value /= *q.intensity;
  } else {
    for (int i = 0; i < q.size(); ++i) r.value += q.weights[i] * f(q.nodes.col(i));
    if (!q.uniform_weights) r.diagnostics.flags.push_back("experimental_weighted_repulsion");
  }
  r.sw_value = r.value;
  r.evaluations = q.size();
  r.wall_seconds = seconds_since(start);
  return r;
}

void finalize_sw(EstimatorResult& r, double p) {
  if (r.value < 0.0) {
    r.value = 0.0;
    r.clipped = true;
    r.diagnostics.flags.push_back("clipped_negative");
  }
  r.sw_value = std::pow(r.value, 1.0 / p);
}

}  // namespace rsw

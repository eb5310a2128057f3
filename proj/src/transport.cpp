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

#include "rsw/transport.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "rsw/error.hpp"

namespace rsw {

void validate_nodes(const QuadratureNodes& q) {
  require(q.size() >= 1, ErrorCode::invalid_argument, "quadrature has no nodes");
  require(q.dim() >= 2, ErrorCode::invalid_argument, "quadrature nodes need d >= 2");
  require(q.weights.size() == q.nodes.cols(), ErrorCode::invalid_argument,
          "weight count does not match node count");
  for (int i = 0; i < q.size(); ++i)
    require(std::abs(q.nodes.col(i).norm() - 1.0) <= 1e-10, ErrorCode::numerical,
            "quadrature node is not unit-norm");
}

DiscreteMeasure::DiscreteMeasure(Matrix atoms, Vector weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  require(atoms_.cols() >= 1, ErrorCode::invalid_argument, "measure needs at least one atom");
  require(atoms_.rows() >= 1, ErrorCode::invalid_argument, "measure atoms need dimension >= 1");
  require(weights_.size() == atoms_.cols(), ErrorCode::invalid_argument,
          "weight count does not match atom count");
  require(weights_.minCoeff() >= 0.0, ErrorCode::invalid_argument, "negative measure weight");
  require(std::abs(weights_.sum() - 1.0) <= 1e-12 * std::max<double>(1.0, static_cast<double>(size())),
          ErrorCode::invalid_argument, "measure weights must sum to 1");
  require(atoms_.allFinite() && weights_.allFinite(), ErrorCode::invalid_argument,
          "measure contains non-finite values");
  uniform_ = (weights_.array() == weights_[0]).all();
}

DiscreteMeasure DiscreteMeasure::uniform(Matrix atoms) {
  const auto m = atoms.cols();
  require(m >= 1, ErrorCode::invalid_argument, "measure needs at least one atom");
  return DiscreteMeasure(std::move(atoms), Vector::Constant(m, 1.0 / static_cast<double>(m)));
}

MeasureMoments DiscreteMeasure::moments() const {
  MeasureMoments out;
  out.mean = atoms_ * weights_;
  const Matrix centered = atoms_.colwise() - out.mean;
  out.covariance = centered * weights_.asDiagonal() * centered.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  out.trace = out.covariance.trace();
  return out;
}

double DiscreteMeasure::moment(double p) const {
  double acc = 0.0;
  for (int i = 0; i < size(); ++i) acc += weights_[i] * std::pow(atoms_.col(i).norm(), p);
  return acc;
}

Projected1D project_measure(const DiscreteMeasure& m, DirectionRef theta) {
  require(theta.size() == m.dim(), ErrorCode::dimension_mismatch,
          "direction and measure dimensions differ");
  Projected1D out;
  out.positions.resize(static_cast<std::size_t>(m.size()));
  Eigen::Map<Vector>(out.positions.data(), m.size()) = m.atoms().transpose() * theta;
  out.weights.assign(m.weights().data(), m.weights().data() + m.size());
  return out;
}

namespace {

inline double cost(double gap, double p) {
  const double a = std::abs(gap);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

void check_mass(const Projected1D& a) {
  require(!a.positions.empty(), ErrorCode::invalid_argument, "empty 1-D measure");
  require(a.positions.size() == a.weights.size(), ErrorCode::invalid_argument,
          "1-D measure positions and weights differ in length");
  double sum = 0.0;
  for (double w : a.weights) {
    require(w >= 0.0, ErrorCode::invalid_argument, "negative 1-D weight");
    sum += w;
  }
  require(std::abs(sum - 1.0) <= 1e-9, ErrorCode::invalid_argument, "1-D weights must sum to 1");
}

bool equal_uniform(const Projected1D& a, const Projected1D& b) {
  if (a.positions.size() != b.positions.size()) return false;
  const double w = a.weights.front();
  auto same = [w](double x) { return x == w; };
  return std::all_of(a.weights.begin(), a.weights.end(), same) &&
         std::all_of(b.weights.begin(), b.weights.end(), same);
}

std::vector<std::size_t> stable_order(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&x](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  return idx;
}

}  // namespace

double wasserstein_1d(const Projected1D& a, const Projected1D& b, double p) {
  require(p >= 1.0 && std::isfinite(p), ErrorCode::invalid_argument, "transport order p must be >= 1");
  check_mass(a);
  check_mass(b);

  if (equal_uniform(a, b)) {
    std::vector<double> xa = a.positions;
    std::vector<double> xb = b.positions;
    std::sort(xa.begin(), xa.end());
    std::sort(xb.begin(), xb.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < xa.size(); ++i) acc += cost(xa[i] - xb[i], p);
    return acc * a.weights.front();
  }

  // Merge the two quantile functions on their cumulative-weight breakpoints.
  const auto ia = stable_order(a.positions);
  const auto ib = stable_order(b.positions);
  std::size_t i = 0;
  std::size_t j = 0;
  double ra = a.weights[ia[0]];
  double rb = b.weights[ib[0]];
  double acc = 0.0;
  constexpr double kMassEps = 1e-15;
  while (i < ia.size() && j < ib.size()) {
    const double m = std::min(ra, rb);
    acc += m * cost(a.positions[ia[i]] - b.positions[ib[j]], p);
    ra -= m;
    rb -= m;
    if (ra <= kMassEps) {
      if (++i < ia.size()) ra = a.weights[ia[i]];
    }
    if (rb <= kMassEps) {
      if (++j < ib.size()) rb = b.weights[ib[j]];
    }
  }
  return acc;
}

namespace {

class SlicedIntegrand {
 public:
  SlicedIntegrand(std::shared_ptr<const DiscreteMeasure> mu, std::shared_ptr<const DiscreteMeasure> nu,
                  double p)
      : mu_(std::move(mu)), nu_(std::move(nu)), p_(p) {
    require(mu_ && nu_, ErrorCode::invalid_argument, "null measure");
    require(mu_->dim() == nu_->dim(), ErrorCode::dimension_mismatch, "measures live in different dimensions");
    require(p_ >= 1.0 && std::isfinite(p_), ErrorCode::invalid_argument, "transport order p must be >= 1");
  }

  double operator()(DirectionRef theta) const {
    return wasserstein_1d(project_measure(*mu_, theta), project_measure(*nu_, theta), p_);
  }

 private:
  std::shared_ptr<const DiscreteMeasure> mu_;
  std::shared_ptr<const DiscreteMeasure> nu_;
  double p_;
};

}  // namespace

Integrand sw_integrand(std::shared_ptr<const DiscreteMeasure> mu, std::shared_ptr<const DiscreteMeasure> nu,
                       double p) {
  return SlicedIntegrand(std::move(mu), std::move(nu), p);
}

Integrand sw_integrand(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  return sw_integrand(std::make_shared<const DiscreteMeasure>(mu), std::make_shared<const DiscreteMeasure>(nu), p);
}

EstimatorResult estimate_sw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                            const QuadratureNodes& nodes) {
  validate_nodes(nodes);
  require(nodes.dim() == mu.dim(), ErrorCode::dimension_mismatch, "nodes and measures differ in dimension");
  if (nodes.uniform_weights)
    require(std::abs(nodes.weights.sum() - 1.0) <= 1e-9, ErrorCode::invalid_argument,
            "node weights must sum to 1");
  const auto start = std::chrono::steady_clock::now();
  const Integrand f = sw_integrand(mu, nu, p);
  EstimatorResult r;
  for (int i = 0; i < nodes.size(); ++i) r.value += nodes.weights[i] * f(nodes.nodes.col(i));
  r.evaluations = nodes.size();
  if (r.value < 0.0) {
    r.value = 0.0;
    r.clipped = true;
  }
  r.sw_value = std::pow(r.value, 1.0 / p);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace rsw

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

#include "rsw/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

#include "rsw/error.hpp"

namespace rsw {

double gegenbauer_eval(int degree, double lambda, double t) {
  require(degree >= 0, ErrorCode::invalid_argument, "Gegenbauer degree must be >= 0");
  require(lambda > 0.0, ErrorCode::invalid_argument, "Gegenbauer parameter must be > 0");
  require(std::abs(t) <= 1.0 + 1e-12, ErrorCode::invalid_argument, "Gegenbauer argument outside [-1, 1]");
  if (degree == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * lambda * t;
  for (int n = 2; n <= degree; ++n) {
    const double next = (2.0 * t * (n + lambda - 1.0) * cur - (n + 2.0 * lambda - 2.0) * prev) / n;
    prev = cur;
    cur = next;
  }
  return cur;
}

double jacobi_eval(int degree, double a, double b, double t) {
  require(degree >= 0, ErrorCode::invalid_argument, "Jacobi degree must be >= 0");
  require(a > -1.0 && b > -1.0, ErrorCode::invalid_argument, "Jacobi parameters must be > -1");
  if (degree == 0) return 1.0;
  double prev = 1.0;
  double cur = (a + 1.0) + (a + b + 2.0) * (t - 1.0) / 2.0;
  for (int n = 2; n <= degree; ++n) {
    const double s = 2.0 * n + a + b;
    const double c1 = 2.0 * n * (n + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * t + a * a - b * b);
    const double c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
    const double next = (c2 * cur - c3 * prev) / c1;
    prev = cur;
    cur = next;
  }
  return cur;
}

double binomial_real(double x, int n) {
  return std::exp(std::lgamma(x + n + 1.0) - std::lgamma(n + 1.0) - std::lgamma(x + 1.0));
}

namespace {

long long binomial_int(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double chebyshev_t(int n, double t) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int k = 2; k <= n; ++k) {
    const double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

long long harmonic_dim(int d, int degree) {
  require(d >= 2, ErrorCode::invalid_argument, "harmonics need d >= 2");
  require(degree >= 0, ErrorCode::invalid_argument, "harmonic degree must be >= 0");
  if (degree == 0) return 1;
  if (d == 2) return 2;
  return binomial_int(degree + d - 1, d - 1) - binomial_int(degree + d - 3, d - 1);
}

long long harmonic_cumulative_dim(int d, int max_degree) {
  require(d >= 2, ErrorCode::invalid_argument, "harmonics need d >= 2");
  require(max_degree >= 0, ErrorCode::invalid_argument, "harmonic degree must be >= 0");
  const long long num = (2LL * max_degree + d - 1) * binomial_int(d + max_degree - 2, max_degree);
  return num / (d - 1);
}

HarmonicDims harmonic_dims(int d, int max_degree) {
  HarmonicDims out;
  for (int l = 0; l <= max_degree; ++l) {
    out.per_degree.push_back(harmonic_dim(d, l));
    out.cumulative += out.per_degree.back();
  }
  require(out.cumulative == harmonic_cumulative_dim(d, max_degree), ErrorCode::internal,
          "harmonic dimension formulas disagree");
  return out;
}

double zonal_kernel(int d, int degree, double t) {
  require(d >= 2, ErrorCode::invalid_argument, "harmonics need d >= 2");
  require(degree >= 0, ErrorCode::invalid_argument, "harmonic degree must be >= 0");
  t = std::clamp(t, -1.0, 1.0);
  if (degree == 0) return 1.0;
  if (d == 2) return 2.0 * chebyshev_t(degree, t);
  const double lambda = 0.5 * (d - 2);
  return (degree + lambda) / lambda * gegenbauer_eval(degree, lambda, t);
}

double zonal_kernel(int d, int degree, DirectionRef x, DirectionRef y) {
  require(x.size() == d && y.size() == d, ErrorCode::dimension_mismatch, "zonal kernel dimension mismatch");
  return zonal_kernel(d, degree, x.dot(y));
}

namespace {

double gram_entry(double lambda, int degree, DirectionRef x, DirectionRef y) {
  return gegenbauer_eval(degree, lambda, std::clamp(x.dot(y), -1.0, 1.0));
}

}  // namespace

FundamentalSet select_fundamental_set(int d, int degree, const Matrix& pool, double pivot_rel_tol) {
  require(d >= 3, ErrorCode::invalid_argument, "fundamental sets are used for d >= 3");
  require(degree >= 1, ErrorCode::invalid_argument, "fundamental sets need degree >= 1");
  require(pool.rows() == d, ErrorCode::dimension_mismatch, "candidate pool has the wrong dimension");
  const int h = static_cast<int>(harmonic_dim(d, degree));
  const int m = static_cast<int>(pool.cols());
  require(m >= h, ErrorCode::construction_failed, "candidate pool smaller than h_l");
  const double lambda = 0.5 * (d - 2);
  const double diag = gegenbauer_eval(degree, lambda, 1.0);

  // Pivoted Cholesky over the pool: each step adds the candidate with the
  // largest Schur complement, i.e. the largest determinant gain.
  Matrix factor = Matrix::Zero(m, h);
  Vector residual = Vector::Constant(m, diag);
  std::vector<char> taken(static_cast<std::size_t>(m), 0);
  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(h));
  double leading = 0.0;
  for (int k = 0; k < h; ++k) {
    int best = -1;
    for (int j = 0; j < m; ++j)
      if (!taken[static_cast<std::size_t>(j)] && (best < 0 || residual[j] > residual[best])) best = j;
    const double pivot = residual[best];
    if (k == 0) leading = pivot;
    if (!(pivot > pivot_rel_tol * leading))
      fail(ErrorCode::construction_failed, "degree-" + std::to_string(degree) +
                                               " Gram matrix is numerically singular on the candidate pool");
    taken[static_cast<std::size_t>(best)] = 1;
    chosen.push_back(best);
    const double root = std::sqrt(pivot);
    for (int j = 0; j < m; ++j) {
      if (taken[static_cast<std::size_t>(j)] && j != best) continue;
      double v = gram_entry(lambda, degree, pool.col(j), pool.col(best));
      v -= factor.row(j).head(k).dot(factor.row(best).head(k));
      factor(j, k) = v / root;
      residual[j] -= factor(j, k) * factor(j, k);
    }
  }

  FundamentalSet out;
  out.dim = d;
  out.degree = degree;
  out.points.resize(d, h);
  out.cholesky = Matrix::Zero(h, h);
  for (int k = 0; k < h; ++k) {
    out.points.col(k) = pool.col(chosen[static_cast<std::size_t>(k)]);
    out.cholesky.row(k).head(k + 1) = factor.row(chosen[static_cast<std::size_t>(k)]).head(k + 1);
  }
  return out;
}

FundamentalSet build_fundamental_set(int d, int degree, Seed seed, const FundamentalSetOptions& opts) {
  require(d >= 3, ErrorCode::invalid_argument, "fundamental sets are used for d >= 3");
  require(degree >= 1, ErrorCode::invalid_argument, "fundamental sets need degree >= 1");
  const int h = static_cast<int>(harmonic_dim(d, degree));
  const int pool_size = opts.greedy ? std::max(h, opts.pool_factor * h) : h;
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    const Matrix pool = sample_uniform_sphere(d, pool_size, seed.child(static_cast<std::uint64_t>(attempt)));
    try {
      return select_fundamental_set(d, degree, pool, opts.pivot_rel_tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::construction_failed) throw;
    }
  }
  fail(ErrorCode::construction_failed, "could not build a fundamental set for degree " + std::to_string(degree) +
                                           " after " + std::to_string(opts.max_attempts) + " attempts");
}

HarmonicBasis::HarmonicBasis(int d, int max_degree, Seed seed, const FundamentalSetOptions& opts)
    : d_(d), max_degree_(max_degree), seed_(seed.value()) {
  require(d >= 2, ErrorCode::invalid_argument, "harmonics need d >= 2");
  require(max_degree >= 0, ErrorCode::invalid_argument, "harmonic degree must be >= 0");
  sets_.resize(static_cast<std::size_t>(max_degree) + 1);
  if (d == 2) return;
  for (int l = 1; l <= max_degree; ++l)
    sets_[static_cast<std::size_t>(l)] =
        build_fundamental_set(d, l, seed.child(phase::basis).child(static_cast<std::uint64_t>(l)), opts);
}

HarmonicBasis::HarmonicBasis(int d, int max_degree, std::uint64_t seed, std::vector<FundamentalSet> sets)
    : d_(d), max_degree_(max_degree), seed_(seed), sets_(std::move(sets)) {
  require(d >= 2 && max_degree >= 0, ErrorCode::invalid_argument, "invalid basis parameters");
  require(sets_.size() == static_cast<std::size_t>(max_degree) + 1, ErrorCode::invalid_argument,
          "one fundamental set per degree is required");
  if (d == 2) return;
  for (int l = 1; l <= max_degree; ++l) {
    const auto& s = sets_[static_cast<std::size_t>(l)];
    const auto h = harmonic_dim(d, l);
    require(s.degree == l && s.dim == d && s.points.rows() == d && s.points.cols() == h &&
                s.cholesky.rows() == h && s.cholesky.cols() == h,
            ErrorCode::invalid_argument, "fundamental set shape does not match its degree");
  }
}

long long HarmonicBasis::degree_size(int degree) const { return harmonic_dim(d_, degree); }

long long HarmonicBasis::cumulative_size(int max_degree) const { return harmonic_cumulative_dim(d_, max_degree); }

const FundamentalSet& HarmonicBasis::fundamental_set(int degree) const {
  require(d_ >= 3, ErrorCode::invalid_argument, "the d = 2 basis has no fundamental sets");
  require(degree >= 1 && degree <= max_degree_, ErrorCode::invalid_argument, "degree out of range");
  return sets_[static_cast<std::size_t>(degree)];
}

Vector HarmonicBasis::eval(int degree, DirectionRef x) const {
  require(degree >= 0 && degree <= max_degree_, ErrorCode::invalid_argument,
          "degree " + std::to_string(degree) + " beyond basis maximum " + std::to_string(max_degree_));
  require(x.size() == d_, ErrorCode::dimension_mismatch, "basis evaluation dimension mismatch");
  if (degree == 0) return Vector::Ones(1);
  if (d_ == 2) {
    const double phi = std::atan2(x[1], x[0]);
    Vector y(2);
    y << std::numbers::sqrt2 * std::cos(degree * phi), std::numbers::sqrt2 * std::sin(degree * phi);
    return y;
  }
  const auto& set = sets_[static_cast<std::size_t>(degree)];
  const double lambda = 0.5 * (d_ - 2);
  const auto h = set.points.cols();
  Vector c(h);
  for (Eigen::Index i = 0; i < h; ++i) c[i] = gram_entry(lambda, degree, x, set.points.col(i));
  set.cholesky.triangularView<Eigen::Lower>().solveInPlace(c);
  return c * std::sqrt((degree + lambda) / lambda);
}

Vector HarmonicBasis::eval_upto(int max_degree, DirectionRef x) const {
  require(max_degree <= max_degree_, ErrorCode::invalid_argument, "basis degree insufficient");
  Vector out(std::max<long long>(0, cumulative_size(max_degree) - 1));
  Eigen::Index offset = 0;
  for (int l = 1; l <= max_degree; ++l) {
    const Vector y = eval(l, x);
    out.segment(offset, y.size()) = y;
    offset += y.size();
  }
  return out;
}

void HarmonicBasis::save(std::ostream& os) const {
  os << "rsw-harmonic-basis 1\n";
  os << "d " << d_ << " max_degree " << max_degree_ << " seed " << seed_ << "\n";
  os << std::setprecision(17);
  if (d_ == 2) return;
  for (int l = 1; l <= max_degree_; ++l) {
    const auto& s = sets_[static_cast<std::size_t>(l)];
    os << "degree " << l << " size " << s.points.cols() << "\n";
    for (Eigen::Index k = 0; k < s.points.cols(); ++k) {
      for (int i = 0; i < d_; ++i) os << (i ? " " : "") << s.points(i, k);
      os << "\n";
    }
    for (Eigen::Index r = 0; r < s.cholesky.rows(); ++r) {
      for (Eigen::Index c = 0; c < s.cholesky.cols(); ++c) os << (c ? " " : "") << s.cholesky(r, c);
      os << "\n";
    }
  }
}

HarmonicBasis HarmonicBasis::load(std::istream& is) {
  std::string magic;
  int version = 0;
  is >> magic >> version;
  require(is && magic == "rsw-harmonic-basis" && version == 1, ErrorCode::parse, "not a version-1 basis file");
  std::string kd, kl, ks;
  int d = 0;
  int max_degree = 0;
  std::uint64_t seed = 0;
  is >> kd >> d >> kl >> max_degree >> ks >> seed;
  require(is && kd == "d" && kl == "max_degree" && ks == "seed", ErrorCode::parse, "malformed basis header");
  std::vector<FundamentalSet> sets(static_cast<std::size_t>(max_degree) + 1);
  if (d >= 3) {
    for (int l = 1; l <= max_degree; ++l) {
      std::string kdeg, ksize;
      int degree = 0;
      long long h = 0;
      is >> kdeg >> degree >> ksize >> h;
      require(is && kdeg == "degree" && ksize == "size" && degree == l && h == harmonic_dim(d, l),
              ErrorCode::parse, "malformed degree block in basis file");
      FundamentalSet s;
      s.dim = d;
      s.degree = l;
      s.points.resize(d, h);
      s.cholesky.resize(h, h);
      for (long long k = 0; k < h; ++k)
        for (int i = 0; i < d; ++i) is >> s.points(i, k);
      for (long long r = 0; r < h; ++r)
        for (long long c = 0; c < h; ++c) is >> s.cholesky(r, c);
      require(static_cast<bool>(is), ErrorCode::parse, "truncated basis file");
      sets[static_cast<std::size_t>(l)] = std::move(s);
    }
  }
  return HarmonicBasis(d, max_degree, seed, std::move(sets));
}

std::shared_ptr<const HarmonicBasis> cached_harmonic_basis(int d, int max_degree, std::uint64_t seed) {
  using Key = std::tuple<int, int, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const HarmonicBasis>> cache;

  std::lock_guard<std::mutex> lock(mutex);
  const Key key{d, max_degree, seed};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  std::filesystem::path file;
  if (const char* dir = std::getenv("RSW_CACHE_DIR"); dir && *dir) {
    std::ostringstream name;
    name << "basis_d" << d << "_L" << max_degree << "_s" << seed << ".txt";
    file = std::filesystem::path(dir) / name.str();
  }

  std::shared_ptr<const HarmonicBasis> basis;
  if (!file.empty() && std::filesystem::exists(file)) {
    std::ifstream in(file);
    try {
      auto loaded = std::make_shared<const HarmonicBasis>(HarmonicBasis::load(in));
      if (loaded->dim() == d && loaded->max_degree() == max_degree && loaded->seed() == seed) basis = loaded;
    } catch (const Error&) {
      // Stale or corrupt cache entry; rebuilt below.
    }
  }
  if (!basis) {
    basis = std::make_shared<const HarmonicBasis>(d, max_degree, Seed(seed));
    if (!file.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(file.parent_path(), ec);
      std::ofstream out(file);
      if (out) basis->save(out);
    }
  }
  cache.emplace(key, basis);
  return basis;
}

}  // namespace rsw

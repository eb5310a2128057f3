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

#include "rsw/problems.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rsw/error.hpp"

namespace rsw {

namespace {

Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
  Matrix a(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) a(i, j) = standard_normal(rng);
  return a;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

GaussianPair gen_gaussian_pair(int d, int m, Seed seed) {
  require(d >= 2, ErrorCode::invalid_argument, "gaussian pair needs d >= 2");
  require(m >= 1, ErrorCode::invalid_argument, "need at least one atom");
  Rng rng = seed.child(phase::problem).engine();
  const Vector mean_mu = gaussian_matrix(d, 1, rng);
  const Vector mean_nu = gaussian_matrix(d, 1, rng);
  const Matrix u = gaussian_matrix(d, d, rng);
  const Matrix v = gaussian_matrix(d, d, rng);
  // x = m + U^T z has covariance U^T U.
  const Matrix xs = (u.transpose() * gaussian_matrix(d, m, rng)).colwise() + mean_mu;
  const Matrix ys = (v.transpose() * gaussian_matrix(d, m, rng)).colwise() + mean_nu;
  return {DiscreteMeasure::uniform(xs), DiscreteMeasure::uniform(ys), mean_mu, mean_nu,
          u.transpose() * u, v.transpose() * v};
}

Vector banana_map(const Vector& x) {
  require(x.size() % 2 == 0, ErrorCode::invalid_argument, "banana map needs an even dimension");
  Vector y = x;
  for (Eigen::Index j = 0; j + 1 < x.size(); j += 2) {
    const double shifted = x[j] - 5.0;
    y[j + 1] = -x[j + 1] + shifted * shifted;
  }
  return y;
}

DiscreteMeasure gen_banana_sample(int d, int m, Seed seed) {
  require(d >= 2 && d % 2 == 0, ErrorCode::invalid_argument, "banana sample needs an even d >= 2");
  require(m >= 1, ErrorCode::invalid_argument, "need at least one atom");
  Rng rng = seed.child(phase::problem).engine();
  Matrix atoms = gaussian_matrix(d, m, rng);
  for (int i = 0; i < m; ++i) atoms.col(i) = banana_map(atoms.col(i));
  return DiscreteMeasure::uniform(std::move(atoms));
}

DiscreteMeasure load_point_cloud(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open point cloud '" + path + "'");
  std::vector<std::vector<double>> rows;
  int weight_col = -1;
  std::size_t width = 0;
  bool first = true;
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size() && numeric; ++i) numeric = parse_double(cells[i], row[i]);
    if (first && !numeric) {
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] == "weight" || cells[i] == "w") weight_col = static_cast<int>(i);
      require(weight_col < 0 || weight_col == static_cast<int>(cells.size()) - 1, ErrorCode::parse,
              path + ": the weight column must be last");
      width = cells.size();
      first = false;
      continue;
    }
    require(numeric, ErrorCode::parse, path + ":" + std::to_string(lineno) + ": non-numeric value");
    if (width == 0) width = row.size();
    require(row.size() == width, ErrorCode::parse,
            path + ":" + std::to_string(lineno) + ": expected " + std::to_string(width) + " columns, got " +
                std::to_string(row.size()));
    first = false;
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorCode::parse, path + ": no atoms");
  const int d = static_cast<int>(width) - (weight_col >= 0 ? 1 : 0);
  require(d >= 1, ErrorCode::parse, path + ": no coordinate columns");
  const int m = static_cast<int>(rows.size());
  Matrix atoms(d, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < d; ++i) atoms(i, j) = rows[j][i];
  if (weight_col < 0) return DiscreteMeasure::uniform(std::move(atoms));

  Vector w(m);
  for (int j = 0; j < m; ++j) {
    w[j] = rows[j][weight_col];
    require(w[j] >= 0.0 && std::isfinite(w[j]), ErrorCode::parse,
            path + ": negative or non-finite weight in row " + std::to_string(j + 1));
  }
  const double total = w.sum();
  require(total > 0.0, ErrorCode::parse, path + ": weights sum to zero");
  if (std::abs(total - 1.0) > 1e-6 && warnings)
    warnings->push_back(path + ": weights sum to " + std::to_string(total) + ", renormalized");
  // Leave rounding-level sums alone so saved clouds load back bit for bit.
  if (std::abs(total - 1.0) > 1e-13 * m) w /= total;
  return DiscreteMeasure(std::move(atoms), std::move(w));
}

void save_point_cloud(const DiscreteMeasure& m, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::io, "cannot write point cloud '" + path + "'");
  for (int i = 0; i < m.dim(); ++i) out << 'x' << i + 1 << ',';
  out << "weight\n" << std::setprecision(17);
  for (int j = 0; j < m.size(); ++j) {
    for (int i = 0; i < m.dim(); ++i) out << m.atoms()(i, j) << ',';
    out << m.weights()[j] << '\n';
  }
  require(out.good(), ErrorCode::io, "write failed for '" + path + "'");
}

}  // namespace rsw

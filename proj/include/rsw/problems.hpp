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

#include <string>
#include <utility>
#include <vector>

#include "rsw/rng.hpp"
#include "rsw/transport.hpp"

namespace rsw {

struct GaussianPair {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  Vector mean_mu, mean_nu;
  Matrix cov_mu, cov_nu;  // U^T U and V^T V
};

GaussianPair gen_gaussian_pair(int d, int m, Seed seed);

/// x_{2j+1} -> x_{2j+1}, x_{2j+2} -> -x_{2j+2} + (x_{2j+1} - 5)^2 (1-based).
Vector banana_map(const Vector& x);
DiscreteMeasure gen_banana_sample(int d, int m, Seed seed);

/// CSV with one atom per row. An optional header names the columns; a
/// column named "weight" (or "w") holds the atom weights, else all columns
/// are coordinates and weights are uniform.
DiscreteMeasure load_point_cloud(const std::string& path, std::vector<std::string>* warnings = nullptr);
void save_point_cloud(const DiscreteMeasure& m, const std::string& path);

}  // namespace rsw

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

#include "rsw/rng.hpp"

#include <cmath>
#include <numbers>

namespace rsw {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed Seed::child(std::uint64_t tag) const {
  return Seed(splitmix64(value_ ^ splitmix64(tag ^ 0x5851f42d4c957f2dULL)));
}

Seed Seed::substream(std::uint64_t replication, std::uint64_t phase_tag) const {
  return child(replication).child(phase_tag);
}

Rng Seed::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(value_), static_cast<std::uint32_t>(value_ >> 32)};
  return Rng(seq);
}

double uniform01(Rng& rng) {
  // 53 random bits in [0, 1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(Rng& rng) {
  // Marsaglia polar method; one value per call keeps the stream stateless.
  for (;;) {
    const double u = 2.0 * uniform01(rng) - 1.0;
    const double v = 2.0 * uniform01(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

}  // namespace rsw

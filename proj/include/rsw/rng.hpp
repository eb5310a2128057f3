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
#include <random>

namespace rsw {

using Rng = std::mt19937_64;

/// Well-known substream phases. Any other 64-bit tag is also valid.
namespace phase {
inline constexpr std::uint64_t problem = 0x70726f62ULL;
inline constexpr std::uint64_t nodes = 0x6e6f6465ULL;
inline constexpr std::uint64_t rotation = 0x726f7461ULL;
inline constexpr std::uint64_t reference = 0x72656665ULL;
inline constexpr std::uint64_t pilot = 0x70696c6fULL;
inline constexpr std::uint64_t proposal = 0x70726f70ULL;
inline constexpr std::uint64_t retry = 0x72657472ULL;
inline constexpr std::uint64_t basis = 0x62617369ULL;
}  // namespace phase

/// Splittable seed. Derived seeds are a pure function of the parent value and
/// the tags, so replication r of an experiment can be regenerated without
/// replaying replications 0..r-1.
class Seed {
 public:
  constexpr Seed() = default;
  constexpr explicit Seed(std::uint64_t value) : value_(value) {}

  constexpr std::uint64_t value() const { return value_; }

  Seed child(std::uint64_t tag) const;
  Seed substream(std::uint64_t replication, std::uint64_t phase_tag) const;

  Rng engine() const;

  friend constexpr bool operator==(Seed a, Seed b) { return a.value_ == b.value_; }

 private:
  std::uint64_t value_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Standard normal and uniform draws with a fixed algorithm (independent of
/// the standard library's distribution implementations).
double standard_normal(Rng& rng);
double uniform01(Rng& rng);

}  // namespace rsw

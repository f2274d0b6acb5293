// Copyright 2026 The reportfix Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REPORTFIX_COMMON_RANDOM_H_
#define REPORTFIX_COMMON_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace reportfix {

// Stateless 64-bit mixer; used to derive independent streams from
// (seed, index) pairs so that draw i never depends on draws 0..i-1.
constexpr uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic generator with distribution helpers implemented here rather
// than via <random> distributions, whose output is library-specific.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(SplitMix64(seed)) {}
  Rng(uint64_t seed, uint64_t stream)
      : engine_(SplitMix64(SplitMix64(seed) ^ SplitMix64(stream + 0x632be59bd9b4e019ULL))) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  size_t Index(size_t n) {
    // Lemire's nearly-divisionless rejection is overkill here; modulo bias is
    // below 2^-40 for every n this project uses.
    return static_cast<size_t>(engine_() % static_cast<uint64_t>(n));
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Draws an index proportionally to non-negative weights. Returns
  // weights.size() - 1 on round-off at the top end.
  size_t Categorical(std::span<const double> weights);

  double Normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace reportfix

#endif  // REPORTFIX_COMMON_RANDOM_H_

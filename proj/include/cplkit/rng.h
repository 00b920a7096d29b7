// Copyright 2026 The cpl-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CPLKIT_RNG_H_
#define CPLKIT_RNG_H_

#include <cstdint>
#include <random>
#include <span>

namespace cplkit {

// Mixes a root seed with a stage tag and up to two unit indices into an
// independent 64-bit seed. Every random stream in the library is derived
// this way so results do not depend on scheduling or thread count:
//   DeriveSeed(seed, stage, a, b) = splitmix(splitmix(splitmix(seed ^ stage)
//                                   ^ a) ^ b)
uint64_t DeriveSeed(uint64_t seed, uint64_t stage, uint64_t a = 0,
                    uint64_t b = 0);

// Stage tags used with DeriveSeed.
inline constexpr uint64_t kStagePerturb = 0x7065727475726201ULL;
inline constexpr uint64_t kStageSurrogate = 0x7375727267617402ULL;
inline constexpr uint64_t kStageFixture = 0x6669787475726503ULL;
inline constexpr uint64_t kStageBenchmark = 0x62656e6368000004ULL;

// Seeded random stream. Samplers are written out explicitly instead of using
// <random> distributions, whose output is implementation defined; a seed
// therefore reproduces the same draws with any standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., n - 1}; n must be positive.
  uint64_t Below(uint64_t n);

  bool Bernoulli(double p) { return Uniform() < p; }

  // Laplace(0, scale).
  double Laplace(double scale);

  // Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cplkit

#endif  // CPLKIT_RNG_H_

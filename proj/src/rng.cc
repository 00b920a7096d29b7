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

#include "cplkit/rng.h"

#include <cmath>

namespace cplkit {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t DeriveSeed(uint64_t seed, uint64_t stage, uint64_t a, uint64_t b) {
  return SplitMix64(SplitMix64(SplitMix64(seed ^ stage) ^ a) ^ b);
}

uint64_t Rng::Below(uint64_t n) {
  // Rejection on the top of the range removes modulo bias.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::Laplace(double scale) {
  // Inverse CDF on u in (-1/2, 1/2).
  double u = Uniform() - 0.5;
  while (u == -0.5) u = Uniform() - 0.5;
  return -scale * std::copysign(std::log1p(-2.0 * std::abs(u)), u);
}

}  // namespace cplkit

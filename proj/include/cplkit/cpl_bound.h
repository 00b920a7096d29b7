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

#ifndef CPLKIT_CPL_BOUND_H_
#define CPLKIT_CPL_BOUND_H_

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cplkit/data_model.h"

namespace cplkit {

// (epsilon, delta) of a neighbour's LDP mechanism.
struct BudgetParams {
  double epsilon = 0.0;
  double delta = 0.0;
};

absl::Status ValidateBudget(const BudgetParams& budget);

// Upper bound on the CPL caused by any (epsilon, delta)-LDP neighbour.
struct BoundedCplResult {
  // ln Hbar* in nats.
  double leakage = 0.0;
  // fbar* = delta * A.
  double relaxation = 0.0;
  // Admitted column indices S*, in admission order.
  std::vector<size_t> subset;
  double a = 0.0;  // sum of G over S*
  double b = 0.0;  // sum of G' over S*
  // Maximizing ordered row pair (x, x').
  size_t x = 0;
  size_t x_prime = 0;
};

// Greedy optimum for a single row pair (G, G'). Indices are admitted in
// descending order of g_i / g'_i (infinite ratios first, 0/0 skipped, ties by
// ascending index) while g_i / g'_i >= (1 + A*lambda) / (1 + B*lambda), with
// lambda = e^epsilon - 1.
struct PairBound {
  double leakage = 0.0;
  double a = 0.0;
  double b = 0.0;
  std::vector<size_t> subset;
};
PairBound GreedyPairBound(std::span<const double> g,
                          std::span<const double> g_prime, double epsilon);

// Maximum of GreedyPairBound over ordered pairs of present rows of
// cond = P(X_hat | X_k). Ties keep the first pair in row-major order.
absl::StatusOr<BoundedCplResult> ComputeCplBound(
    const ConditionalDistribution& cond, const BudgetParams& budget);

// Same contract by exhaustive search over all nonempty column subsets.
// Limited to 20 columns.
absl::StatusOr<BoundedCplResult> ComputeCplBoundBruteForce(
    const ConditionalDistribution& cond, const BudgetParams& budget);

// Saturation value of the bound as epsilon grows:
//   ln max_{x_hat, x, x'} p(x_hat | x) / p(x_hat | x').
struct CplLimit {
  double value = 0.0;  // over finite ratios
  bool infinite = false;
  // Row pair of an infinite ratio when `infinite`, otherwise of `value`.
  size_t x = 0;
  size_t x_prime = 0;
};
absl::StatusOr<CplLimit> ComputeCplLimit(const ConditionalDistribution& cond);

// Pair of present rows with disjoint supports, if any. The bound equals
// epsilon exactly when such a pair exists.
std::optional<std::pair<size_t, size_t>> IsMaxAttainable(
    const ConditionalDistribution& cond);

}  // namespace cplkit

#endif  // CPLKIT_CPL_BOUND_H_

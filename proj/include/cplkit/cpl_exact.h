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

#ifndef CPLKIT_CPL_EXACT_H_
#define CPLKIT_CPL_EXACT_H_

#include <cstddef>
#include <optional>

#include "absl/status/statusor.h"
#include "cplkit/data_model.h"
#include "cplkit/mechanisms.h"

namespace cplkit {

// Output symbol y and ordered conditioning pair (x, x') of a likelihood ratio.
struct ExactCplWitness {
  size_t output = 0;
  size_t x = 0;
  size_t x_prime = 0;

  friend bool operator==(const ExactCplWitness&,
                         const ExactCplWitness&) = default;
};

struct ExactCplResult {
  // Natural-log leakage over all finite ratios.
  double leakage = 0.0;
  ExactCplWitness witness;
  // Set when some p(y | x') = 0 < p(y | x); the leakage above then only
  // covers the finite ratios.
  bool infinite = false;
  std::optional<ExactCplWitness> infinite_witness;
};

// CPL on X_k caused by releasing a neighbour through the mechanism `trans`:
//   l = ln max_{y, x != x'} (C_y . G_x) / (C_y . G_x')
// where G_x is row x of `cond` = P(X_hat | X_k) and C_y is column y of
// `trans` = P(Y_hat | X_hat). Absent rows of `cond` are skipped.
absl::StatusOr<ExactCplResult> ComputeExactCpl(
    const ConditionalDistribution& cond, const TransitionMatrix& trans);

// Evaluates the ratio at a single witness; useful for checking results.
double ExactCplRatio(const ConditionalDistribution& cond,
                     const TransitionMatrix& trans,
                     const ExactCplWitness& witness);

}  // namespace cplkit

#endif  // CPLKIT_CPL_EXACT_H_

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

#include "cplkit/cpl_exact.h"

#include <cmath>
#include <vector>

#include "absl/strings/str_format.h"

namespace cplkit {
namespace {

double OutputLikelihood(const ConditionalDistribution& cond,
                        const TransitionMatrix& trans, size_t x, size_t y) {
  double v = 0.0;
  for (size_t j = 0; j < cond.num_cols(); ++j)
    v += cond.at(x, j) * trans.at(j, y);
  return v;
}

}  // namespace

double ExactCplRatio(const ConditionalDistribution& cond,
                     const TransitionMatrix& trans,
                     const ExactCplWitness& witness) {
  return OutputLikelihood(cond, trans, witness.x, witness.output) /
         OutputLikelihood(cond, trans, witness.x_prime, witness.output);
}

absl::StatusOr<ExactCplResult> ComputeExactCpl(
    const ConditionalDistribution& cond, const TransitionMatrix& trans) {
  if (cond.num_cols() != trans.num_inputs()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "conditional has %d columns but the mechanism has %d inputs",
        cond.num_cols(), trans.num_inputs()));
  }
  if (cond.num_present() < 2) {
    return absl::InvalidArgumentError(
        "need at least two conditioning symbols with positive mass");
  }
  std::vector<size_t> rows;
  for (size_t x = 0; x < cond.num_rows(); ++x) {
    if (cond.present(x)) rows.push_back(x);
  }

  ExactCplResult result;
  double best = 0.0;
  bool have_best = false;
  std::vector<double> v(cond.num_rows());
  for (size_t y = 0; y < trans.num_outputs(); ++y) {
    for (size_t x : rows) v[x] = OutputLikelihood(cond, trans, x, y);
    for (size_t x : rows) {
      for (size_t xp : rows) {
        if (x == xp) continue;
        if (v[xp] == 0.0) {
          if (v[x] > 0.0 && !result.infinite) {
            result.infinite = true;
            result.infinite_witness = ExactCplWitness{y, x, xp};
          }
          continue;
        }
        double ratio = v[x] / v[xp];
        if (!have_best || ratio > best) {
          best = ratio;
          have_best = true;
          result.witness = ExactCplWitness{y, x, xp};
        }
      }
    }
  }
  result.leakage = have_best ? std::max(0.0, std::log(best)) : 0.0;
  return result;
}

}  // namespace cplkit

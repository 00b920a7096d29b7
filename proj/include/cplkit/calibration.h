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

#ifndef CPLKIT_CALIBRATION_H_
#define CPLKIT_CALIBRATION_H_

#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "cplkit/data_model.h"

namespace cplkit {

// Pairwise conditionals of an attribute set. at(i, j) is P(X_j | X_i), the
// input for the CPL on attribute i caused by attribute j.
class PairwiseConditionals {
 public:
  static absl::StatusOr<PairwiseConditionals> FromDataset(
      const Dataset& dataset);
  // joints[i][j] is the joint of (X_i, X_j) with X_i on the rows; the
  // diagonal is ignored.
  static absl::StatusOr<PairwiseConditionals> FromJoints(
      const std::vector<std::vector<std::optional<JointDistribution>>>& joints);

  size_t size() const { return n_; }
  const ConditionalDistribution& at(size_t i, size_t j) const {
    return *conds_[i * n_ + j];
  }

 private:
  PairwiseConditionals(size_t n,
                       std::vector<std::optional<ConditionalDistribution>> c)
      : n_(n), conds_(std::move(c)) {}

  size_t n_ = 0;
  std::vector<std::optional<ConditionalDistribution>> conds_;
};

enum class CalibrationEngine {
  kBound,     // safe for any pure-LDP mechanism
  kExactGrr,  // valid only when every attribute uses GRR
};

struct WorstTpl {
  double tpl = 0.0;
  size_t attribute = 0;
};

// max_i [eps + sum_{j != i} CPL(P(X_j | X_i), eps)] for a uniform budget.
absl::StatusOr<WorstTpl> EvaluateWorstTpl(const PairwiseConditionals& conds,
                                          double epsilon,
                                          CalibrationEngine engine,
                                          int threads = 1);

struct CalibrationStep {
  double epsilon = 0.0;
  double worst_tpl = 0.0;
  size_t worst_attribute = 0;
};

struct CalibrationResult {
  double epsilon_star = 0.0;
  size_t worst_attribute = 0;
  double worst_tpl = 0.0;
  int iterations = 0;
  // The equal split eps_bar / n already violates the target.
  bool infeasible = false;
  // Every evaluated budget, feasible ones first, ending with the first
  // infeasible one when the search stopped on it.
  std::vector<CalibrationStep> trace;
};

// Slack allowed when comparing a TPL against the target budget.
inline constexpr double kCalibrationSlack = 1e-9;

// Starts at eps_bar / n and steps by delta_step while the worst TPL stays
// within eps_bar; returns the last feasible budget.
absl::StatusOr<CalibrationResult> Calibrate(
    const PairwiseConditionals& conds, double epsilon_bar,
    double delta_step = 0.01,
    CalibrationEngine engine = CalibrationEngine::kBound, int threads = 1);

}  // namespace cplkit

#endif  // CPLKIT_CALIBRATION_H_

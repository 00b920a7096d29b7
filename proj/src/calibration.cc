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

#include "cplkit/calibration.h"

#include <cmath>
#include <limits>
#include <mutex>

#include "absl/strings/str_format.h"
#include "cplkit/cpl_bound.h"
#include "cplkit/cpl_exact.h"
#include "cplkit/mechanisms.h"
#include "cplkit/parallel.h"
#include "cplkit/status_macros.h"

namespace cplkit {
namespace {

absl::StatusOr<double> PairCpl(const ConditionalDistribution& cond,
                               double epsilon, CalibrationEngine engine) {
  if (cond.num_present() < 2) return 0.0;
  if (engine == CalibrationEngine::kBound) {
    ASSIGN_OR_RETURN(BoundedCplResult r,
                     ComputeCplBound(cond, BudgetParams{epsilon, 0.0}));
    return r.leakage;
  }
  if (cond.num_cols() < 2) return 0.0;
  ASSIGN_OR_RETURN(MechanismSpec spec,
                   MechanismSpec::Create(MechanismKind::kGrr, epsilon,
                                         static_cast<int>(cond.num_cols())));
  ASSIGN_OR_RETURN(TransitionMatrix trans, TransitionMatrixFor(spec));
  ASSIGN_OR_RETURN(ExactCplResult r, ComputeExactCpl(cond, trans));
  if (r.infinite) return std::numeric_limits<double>::infinity();
  return r.leakage;
}

}  // namespace

absl::StatusOr<PairwiseConditionals> PairwiseConditionals::FromDataset(
    const Dataset& dataset) {
  const size_t n = dataset.num_attributes();
  std::vector<std::optional<ConditionalDistribution>> conds(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      ASSIGN_OR_RETURN(JointDistribution joint, EmpiricalJoint(dataset, i, j));
      conds[i * n + j] = ConditionalFromJoint(joint, ConditionOn::kRows);
    }
  }
  return PairwiseConditionals(n, std::move(conds));
}

absl::StatusOr<PairwiseConditionals> PairwiseConditionals::FromJoints(
    const std::vector<std::vector<std::optional<JointDistribution>>>& joints) {
  const size_t n = joints.size();
  std::vector<std::optional<ConditionalDistribution>> conds(n * n);
  for (size_t i = 0; i < n; ++i) {
    if (joints[i].size() != n) {
      return absl::InvalidArgumentError("joint grid must be square");
    }
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!joints[i][j].has_value()) {
        return absl::InvalidArgumentError(
            absl::StrFormat("joint for pair (%d, %d) is missing", i, j));
      }
      conds[i * n + j] =
          ConditionalFromJoint(*joints[i][j], ConditionOn::kRows);
    }
  }
  return PairwiseConditionals(n, std::move(conds));
}

absl::StatusOr<WorstTpl> EvaluateWorstTpl(const PairwiseConditionals& conds,
                                          double epsilon,
                                          CalibrationEngine engine,
                                          int threads) {
  const size_t n = conds.size();
  if (n == 0) return absl::InvalidArgumentError("no attributes");
  std::vector<double> tpl(n, epsilon);
  std::mutex mu;
  absl::Status first_error;
  ParallelFor(n, threads, [&](size_t i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      absl::StatusOr<double> l = PairCpl(conds.at(i, j), epsilon, engine);
      if (!l.ok()) {
        std::lock_guard<std::mutex> lock(mu);
        if (first_error.ok()) first_error = l.status();
        return;
      }
      tpl[i] += *l;
    }
  });
  RETURN_IF_ERROR(first_error);
  WorstTpl worst{tpl[0], 0};
  for (size_t i = 1; i < n; ++i) {
    if (tpl[i] > worst.tpl) worst = WorstTpl{tpl[i], i};
  }
  return worst;
}

absl::StatusOr<CalibrationResult> Calibrate(const PairwiseConditionals& conds,
                                            double epsilon_bar,
                                            double delta_step,
                                            CalibrationEngine engine,
                                            int threads) {
  if (!(epsilon_bar > 0) || !std::isfinite(epsilon_bar)) {
    return absl::InvalidArgumentError("target budget must be finite and > 0");
  }
  if (!(delta_step > 0) || !std::isfinite(delta_step)) {
    return absl::InvalidArgumentError("step must be finite and > 0");
  }
  const size_t n = conds.size();
  if (n == 0) return absl::InvalidArgumentError("no attributes");
  const double start = epsilon_bar / static_cast<double>(n);
  const double limit = epsilon_bar + kCalibrationSlack;

  CalibrationResult result;
  ASSIGN_OR_RETURN(WorstTpl worst,
                   EvaluateWorstTpl(conds, start, engine, threads));
  result.trace.push_back(CalibrationStep{start, worst.tpl, worst.attribute});
  result.epsilon_star = start;
  result.worst_tpl = worst.tpl;
  result.worst_attribute = worst.attribute;
  if (worst.tpl > limit) {
    result.infeasible = true;
    return result;
  }
  // Worst TPL is at least the budget itself, so the loop ends once the
  // candidate exceeds epsilon_bar.
  for (int it = 1;; ++it) {
    const double next = start + it * delta_step;
    ASSIGN_OR_RETURN(worst, EvaluateWorstTpl(conds, next, engine, threads));
    result.trace.push_back(CalibrationStep{next, worst.tpl, worst.attribute});
    if (worst.tpl > limit) break;
    result.epsilon_star = next;
    result.worst_tpl = worst.tpl;
    result.worst_attribute = worst.attribute;
    result.iterations = it;
  }
  return result;
}

}  // namespace cplkit

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

#ifndef CPLKIT_STATISTICAL_H_
#define CPLKIT_STATISTICAL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cplkit/data_model.h"
#include "cplkit/mechanisms.h"

namespace cplkit {

struct EstimationConfig {
  // Expansion factor r: each record is perturbed r times independently.
  int expansion = 50;
  // Number of permutation surrogates.
  int surrogates = 1000;
  double alpha = 0.05;
  uint64_t seed = 0;
  // Worker count; <= 0 means DefaultThreadCount().
  int threads = 0;
};

absl::Status ValidateConfig(const EstimationConfig& config);

// Rows perturbed per random stream in PerturbDataset.
inline constexpr size_t kPerturbBlockSize = 4096;

// Upper limit on |X_k| * |W| contingency cells.
inline constexpr size_t kMaxContingencyCells = 1000000;

// Expands `dataset` r times, then perturbs and decodes every attribute with
// its own mechanism. Row i of the result derives from record i % N. Block b
// of attribute a uses the stream DeriveSeed(seed, kStagePerturb, a, b).
absl::StatusOr<Dataset> PerturbDataset(const Dataset& dataset,
                                       std::span<const MechanismSpec> specs,
                                       const EstimationConfig& config);

// Sup-ratio statistic without a significance test.
struct LeakageEstimate {
  double leakage = 0.0;
  // (x, w) cells with n(x) > 0, w observed, and n(x, w) = 0.
  size_t excluded_cells = 0;
  // Observed w values with at least two positive conditional counts.
  size_t admissible_outputs = 0;
};

// Empirical CPL on target k from the decoded neighbour tuple W over
// `neighbors`:
//   ln max_{w, x, x'} p_hat(w | x) / p_hat(w | x')
// over cells where both counts are positive. `original` may hold the N
// unexpanded records or be row aligned with `perturbed`. Returns
// FailedPrecondition when no cell is admissible.
absl::StatusOr<LeakageEstimate> EstimateLeakage(
    const Dataset& perturbed, const Dataset& original, size_t target,
    std::span<const size_t> neighbors);

struct StatisticalCplResult {
  double leakage = 0.0;
  double p_value = 1.0;
  bool significant = false;
  size_t excluded_cells = 0;
};

// Permutation test p-value (1 + #{surrogate >= observed}) / (1 + S).
// Surrogate s shuffles each neighbour column independently with the stream
// DeriveSeed(seed, kStageSurrogate, s); the target column is left intact.
absl::StatusOr<double> PermutationSignificance(
    const Dataset& perturbed, const Dataset& original, size_t target,
    std::span<const size_t> neighbors, const EstimationConfig& config);

absl::StatusOr<StatisticalCplResult> EstimateStatisticalCpl(
    const Dataset& perturbed, const Dataset& original, size_t target,
    std::span<const size_t> neighbors, const EstimationConfig& config);

// Total leakage on the target: W is the decoded target together with its
// neighbours (all other attributes when `neighbors` is unset).
absl::StatusOr<StatisticalCplResult> EstimateStatisticalTpl(
    const Dataset& perturbed, const Dataset& original, size_t target,
    const EstimationConfig& config,
    std::optional<std::vector<size_t>> neighbors = std::nullopt);

// Surrogate s of `perturbed` with the listed columns shuffled, as used by
// the permutation test.
absl::StatusOr<Dataset> BuildSurrogate(const Dataset& perturbed,
                                       std::span<const size_t> columns,
                                       uint64_t seed, uint64_t index);

}  // namespace cplkit

#endif  // CPLKIT_STATISTICAL_H_

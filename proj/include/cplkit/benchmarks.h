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

#ifndef CPLKIT_BENCHMARKS_H_
#define CPLKIT_BENCHMARKS_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "cplkit/data_model.h"
#include "cplkit/mechanisms.h"
#include "cplkit/statistical.h"

namespace cplkit {

// Square grid of pairwise CPL; entry [i][j] is L_{X_j -> X_i}. The diagonal
// is ignored.
using CplGrid = std::vector<std::vector<double>>;

// Off-diagonal entries in row-major order.
std::vector<double> OffDiagonal(const CplGrid& grid);

// Sum of squared differences over the sum of squared references, across
// all ordered pairs. 0 when both are 0, +inf when only the reference is.
absl::StatusOr<double> NmseCpl(const CplGrid& estimate,
                               const CplGrid& reference);

enum class Region { kP1, kR1, kR2, kR3 };
const char* RegionName(Region region);

// Tolerance for treating undershoot or overshoot as zero.
inline constexpr double kRegionTolerance = 1e-9;

struct BenchmarkPoint {
  double undershoot = 0.0;
  double overshoot = 0.0;
  Region region = Region::kP1;

  double DistanceFromOrigin() const;
};

// undershoot = sum_{l* >= l} (l* - l) / (eps q),
// overshoot  = sum_{l* <  l} (l - l*) / (eps q).
absl::StatusOr<BenchmarkPoint> UndershootOvershoot(
    std::span<const double> reference, std::span<const double> estimates,
    double epsilon);

// Every pair leaks the full budget.
CplGrid SplAnlEstimates(size_t n, double epsilon);

// Pairs in the same connected component of the |PCC| >= threshold graph get
// epsilon; all other pairs get 0.
absl::StatusOr<CplGrid> GrfEstimates(
    const std::vector<std::vector<double>>& pcc, double threshold,
    double epsilon);

enum class ReferenceSource {
  kGenericBound,
  kExactGrr,
  kExactExp,
  kStatistical
};
const char* ReferenceSourceName(ReferenceSource source);
absl::StatusOr<ReferenceSource> ParseReferenceSource(std::string_view name);

// CPL grid from the empirical pairwise conditionals of `dataset`:
// the generic bound, or the exact value for GRR / EXP neighbours.
absl::StatusOr<CplGrid> AnalyticCplGrid(const Dataset& dataset,
                                        ReferenceSource source, double epsilon);

// CPL grid estimated statistically after perturbing every attribute with
// `kind` at `epsilon`.
absl::StatusOr<CplGrid> StatisticalCplGrid(const Dataset& dataset,
                                           MechanismKind kind, double epsilon,
                                           const EstimationConfig& config);

// Reference grid for any source; `config` is used by kStatistical, which
// perturbs with GRR.
absl::StatusOr<CplGrid> ReferenceGrid(const Dataset& dataset,
                                      ReferenceSource source, double epsilon,
                                      const EstimationConfig& config);

struct AnalyzerPoint {
  std::string analyzer;
  double epsilon = 0.0;
  BenchmarkPoint point;
};

// Scores SPL-ANL, GRF at each threshold, the generic bound, and the exact
// GRR / EXP analyzers against `reference` at each epsilon.
absl::StatusOr<std::vector<AnalyzerPoint>> AnalyzerBenchmark(
    const Dataset& dataset, std::span<const double> epsilons,
    ReferenceSource reference, std::span<const double> grf_thresholds,
    const EstimationConfig& config);

struct UtilityReport {
  double freq_nmse = 0.0;
  double zero_one_error = 0.0;
  // TCPL' / TCPL*; 0 when TCPL* = 0.
  double norm_tcpl = 0.0;
  double tcpl = 0.0;
  double tcpl_bound = 0.0;
};

struct UtilityPoint {
  MechanismKind mechanism;
  double epsilon = 0.0;
  UtilityReport report;
};

// How TCPL' is obtained in the utility benchmark.
enum class UtilityCplSource {
  kExactWhenAvailable,  // exact for GRR / EXP, statistical otherwise
  kStatistical,
};

// For each mechanism and epsilon: frequency-estimation NMSE summed over
// attributes, 0-1 error of decoded reports, and TCPL' normalized by the
// generic-bound TCPL*. Reports come from one pass over the N records with
// streams DeriveSeed(seed, kStageBenchmark, cell, attribute).
absl::StatusOr<std::vector<UtilityPoint>> UtilityBenchmark(
    const Dataset& dataset, std::span<const MechanismKind> mechanisms,
    std::span<const double> epsilons, UtilityCplSource source,
    const EstimationConfig& config);

}  // namespace cplkit

#endif  // CPLKIT_BENCHMARKS_H_

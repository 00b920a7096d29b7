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

#ifndef CPLKIT_CORRELATION_METRICS_H_
#define CPLKIT_CORRELATION_METRICS_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "cplkit/data_model.h"

namespace cplkit {

// Conventional dependence measures between the row and column attributes of
// a joint distribution. All entropies are in nats.
struct MetricReport {
  double mi = 0.0;
  // MI / H(A, B); 0 when H(A, B) = 0.
  double nmi = 0.0;
  // Unset when either marginal is concentrated on one code.
  std::optional<double> pcc;
  double h_a = 0.0;
  double h_b = 0.0;
  double h_joint = 0.0;
};

// Integer codes default to 1..m for rows and 1..t for columns.
absl::StatusOr<MetricReport> ComputeMetrics(
    const JointDistribution& joint,
    const std::optional<std::vector<double>>& row_codes = std::nullopt,
    const std::optional<std::vector<double>>& col_codes = std::nullopt);

double Entropy(std::span<const double> p);

// n x n matrix of PCC between dataset columns under default codes. Entries
// with an undefined PCC are 0; the diagonal is 1.
absl::StatusOr<std::vector<std::vector<double>>> PccMatrix(
    const Dataset& dataset);

}  // namespace cplkit

#endif  // CPLKIT_CORRELATION_METRICS_H_

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

#include "cplkit/correlation_metrics.h"

#include <algorithm>
#include <cmath>

#include "cplkit/status_macros.h"

namespace cplkit {

double Entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0) h -= v * std::log(v);
  }
  return h;
}

absl::StatusOr<MetricReport> ComputeMetrics(
    const JointDistribution& joint,
    const std::optional<std::vector<double>>& row_codes,
    const std::optional<std::vector<double>>& col_codes) {
  const size_t m = joint.rows();
  const size_t t = joint.cols();
  if ((row_codes && row_codes->size() != m) ||
      (col_codes && col_codes->size() != t)) {
    return absl::InvalidArgumentError("code vector length mismatch");
  }
  std::vector<double> a_code(m), b_code(t);
  for (size_t i = 0; i < m; ++i)
    a_code[i] = row_codes ? (*row_codes)[i] : i + 1.0;
  for (size_t j = 0; j < t; ++j)
    b_code[j] = col_codes ? (*col_codes)[j] : j + 1.0;

  const ProbabilityVector pa = joint.RowMarginal();
  const ProbabilityVector pb = joint.ColMarginal();
  MetricReport r;
  r.h_a = Entropy(pa);
  r.h_b = Entropy(pb);
  r.h_joint = Entropy(joint.values());
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < t; ++j) {
      double p = joint.at(i, j);
      if (p > 0) r.mi += p * std::log(p / (pa[i] * pb[j]));
    }
  }
  r.mi = std::max(0.0, r.mi);
  r.nmi = r.h_joint > 0 ? std::clamp(r.mi / r.h_joint, 0.0, 1.0) : 0.0;

  double mean_a = 0, mean_b = 0;
  for (size_t i = 0; i < m; ++i) mean_a += pa[i] * a_code[i];
  for (size_t j = 0; j < t; ++j) mean_b += pb[j] * b_code[j];
  double var_a = 0, var_b = 0, cov = 0;
  for (size_t i = 0; i < m; ++i)
    var_a += pa[i] * (a_code[i] - mean_a) * (a_code[i] - mean_a);
  for (size_t j = 0; j < t; ++j)
    var_b += pb[j] * (b_code[j] - mean_b) * (b_code[j] - mean_b);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < t; ++j) {
      cov += joint.at(i, j) * (a_code[i] - mean_a) * (b_code[j] - mean_b);
    }
  }
  if (var_a > 1e-15 && var_b > 1e-15) {
    r.pcc = std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
  }
  return r;
}

absl::StatusOr<std::vector<std::vector<double>>> PccMatrix(
    const Dataset& dataset) {
  const size_t n = dataset.num_attributes();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    out[i][i] = 1.0;
    for (size_t j = i + 1; j < n; ++j) {
      ASSIGN_OR_RETURN(JointDistribution joint, EmpiricalJoint(dataset, i, j));
      ASSIGN_OR_RETURN(MetricReport r, ComputeMetrics(joint));
      out[i][j] = out[j][i] = r.pcc.value_or(0.0);
    }
  }
  return out;
}

}  // namespace cplkit

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

#include "cplkit/composition.h"

#include <limits>

#include "absl/strings/str_format.h"

namespace cplkit {

absl::StatusOr<LeakagePair> SequentialCompose(
    std::span<const LeakagePair> parts) {
  if (parts.empty()) {
    return absl::InvalidArgumentError("nothing to compose");
  }
  LeakagePair out;
  for (const LeakagePair& p : parts) {
    out.leakage += p.leakage;
    out.relaxation += p.relaxation;
    out.infinite = out.infinite || p.infinite;
    out.relaxation_overflow = out.relaxation_overflow || p.relaxation_overflow;
  }
  if (out.relaxation >= 1.0) {
    out.relaxation = kMaxRelaxation;
    out.relaxation_overflow = true;
  }
  return out;
}

LeakagePair TplUpperBound(const LeakagePair& own,
                          std::span<const LeakagePair> neighbors) {
  std::vector<LeakagePair> parts;
  parts.reserve(neighbors.size() + 1);
  parts.push_back(own);
  parts.insert(parts.end(), neighbors.begin(), neighbors.end());
  return *SequentialCompose(parts);
}

CplMatrix::CplMatrix(std::vector<std::string> names)
    : names_(std::move(names)), entries_(names_.size() * names_.size()) {}

void CplMatrix::Set(size_t i, size_t j, LeakagePair value) {
  entries_[i * names_.size() + j] = value;
}

absl::StatusOr<double> Tcpl(const CplMatrix& matrix) {
  double total = 0.0;
  bool infinite = false;
  for (size_t i = 0; i < matrix.size(); ++i) {
    for (size_t j = 0; j < matrix.size(); ++j) {
      if (i == j) continue;
      const std::optional<LeakagePair>& e = matrix.Get(i, j);
      if (!e.has_value()) {
        return absl::InvalidArgumentError(
            absl::StrFormat("CPL entry (%d, %d) is missing", i, j));
      }
      infinite = infinite || e->infinite;
      total += e->leakage;
    }
  }
  if (infinite) return std::numeric_limits<double>::infinity();
  return total;
}

absl::StatusOr<LeakagePair> TplFromMatrix(const CplMatrix& matrix, size_t i,
                                          const LeakagePair& own) {
  if (i >= matrix.size()) {
    return absl::OutOfRangeError("attribute index out of range");
  }
  std::vector<LeakagePair> neighbors;
  for (size_t j = 0; j < matrix.size(); ++j) {
    if (j == i) continue;
    const std::optional<LeakagePair>& e = matrix.Get(i, j);
    if (!e.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("CPL entry (%d, %d) is missing", i, j));
    }
    neighbors.push_back(*e);
  }
  return TplUpperBound(own, neighbors);
}

}  // namespace cplkit

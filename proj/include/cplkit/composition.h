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

#ifndef CPLKIT_COMPOSITION_H_
#define CPLKIT_COMPOSITION_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "cplkit/cpl_bound.h"

namespace cplkit {

// (leakage, relaxation) pair; holds (epsilon, delta) or (l, fbar*).
struct LeakagePair {
  double leakage = 0.0;
  double relaxation = 0.0;
  // Some component was an infinite CPL witness.
  bool infinite = false;
  // The relaxation sum reached 1 and was clamped below it.
  bool relaxation_overflow = false;

  friend bool operator==(const LeakagePair&, const LeakagePair&) = default;
};

// Largest double below 1; the clamp value for overflowing relaxations.
inline constexpr double kMaxRelaxation = 1.0 - 0x1.0p-53;

// Sums leakages and relaxations. Errors on an empty list.
absl::StatusOr<LeakagePair> SequentialCompose(
    std::span<const LeakagePair> parts);

// Own mechanism budget composed with one CPL pair per neighbour.
LeakagePair TplUpperBound(const LeakagePair& own,
                          std::span<const LeakagePair> neighbors);

// n x n grid of pairwise CPL. Entry (i, j) is L_{X_j -> X_i}: the leakage on
// attribute i caused by releasing attribute j. The diagonal is unused.
class CplMatrix {
 public:
  explicit CplMatrix(std::vector<std::string> names);

  size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  void Set(size_t i, size_t j, LeakagePair value);
  const std::optional<LeakagePair>& Get(size_t i, size_t j) const {
    return entries_[i * names_.size() + j];
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::optional<LeakagePair>> entries_;
};

// Total CPL: sum of all off-diagonal leakage components. Returns +inf when
// any entry is infinite and an error when an entry is missing.
absl::StatusOr<double> Tcpl(const CplMatrix& matrix);

// TPL upper bound for attribute i from row i of the matrix.
absl::StatusOr<LeakagePair> TplFromMatrix(const CplMatrix& matrix, size_t i,
                                          const LeakagePair& own);

}  // namespace cplkit

#endif  // CPLKIT_COMPOSITION_H_

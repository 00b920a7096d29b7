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

#include "cplkit/cpl_bound.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_format.h"

namespace cplkit {
namespace {

absl::Status CheckRows(const ConditionalDistribution& cond) {
  if (cond.num_present() < 2) {
    return absl::InvalidArgumentError(
        "need at least two conditioning symbols with positive mass");
  }
  return absl::OkStatus();
}

std::vector<size_t> PresentRows(const ConditionalDistribution& cond) {
  std::vector<size_t> rows;
  for (size_t x = 0; x < cond.num_rows(); ++x) {
    if (cond.present(x)) rows.push_back(x);
  }
  return rows;
}

// Runs `pair_fn(x, x')` over ordered present pairs and keeps the first
// strict maximum.
template <typename PairFn>
BoundedCplResult MaximizeOverPairs(const ConditionalDistribution& cond,
                                   const BudgetParams& budget, PairFn pair_fn) {
  BoundedCplResult best;
  bool have = false;
  const std::vector<size_t> rows = PresentRows(cond);
  for (size_t x : rows) {
    for (size_t xp : rows) {
      if (x == xp) continue;
      PairBound pb = pair_fn(cond.row(x), cond.row(xp));
      if (!have || pb.leakage > best.leakage) {
        have = true;
        best.leakage = pb.leakage;
        best.a = pb.a;
        best.b = pb.b;
        best.subset = std::move(pb.subset);
        best.x = x;
        best.x_prime = xp;
      }
    }
  }
  best.leakage = std::max(0.0, best.leakage);
  best.relaxation = budget.delta * best.a;
  return best;
}

PairBound BruteForcePairBound(std::span<const double> g,
                              std::span<const double> g_prime, double epsilon) {
  const size_t t = g.size();
  const double e = std::exp(epsilon);
  PairBound best;
  bool have = false;
  for (uint64_t mask = 1; mask < (uint64_t{1} << t); ++mask) {
    double in_g = 0, out_g = 0, in_gp = 0, out_gp = 0;
    for (size_t i = 0; i < t; ++i) {
      if (mask >> i & 1) {
        in_g += g[i];
        in_gp += g_prime[i];
      } else {
        out_g += g[i];
        out_gp += g_prime[i];
      }
    }
    double leakage = std::log(out_g + e * in_g) - std::log(out_gp + e * in_gp);
    if (!have || leakage > best.leakage) {
      have = true;
      best.leakage = leakage;
      best.a = in_g;
      best.b = in_gp;
      best.subset.clear();
      for (size_t i = 0; i < t; ++i) {
        if (mask >> i & 1) best.subset.push_back(i);
      }
    }
  }
  return best;
}

}  // namespace

absl::Status ValidateBudget(const BudgetParams& budget) {
  if (!(budget.epsilon >= 0) || !std::isfinite(budget.epsilon)) {
    return absl::InvalidArgumentError("epsilon must be finite and >= 0");
  }
  if (!(budget.delta >= 0 && budget.delta < 1)) {
    return absl::InvalidArgumentError("delta must lie in [0, 1)");
  }
  return absl::OkStatus();
}

PairBound GreedyPairBound(std::span<const double> g,
                          std::span<const double> g_prime, double epsilon) {
  std::vector<size_t> order;
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i] > 0 || g_prime[i] > 0) order.push_back(i);
  }
  // Cross-multiplied comparison keeps g'_i = 0 < g_i ahead of every finite
  // ratio without forming infinities.
  std::stable_sort(order.begin(), order.end(), [&](size_t i, size_t j) {
    return g[i] * g_prime[j] > g[j] * g_prime[i];
  });
  const double lambda = std::expm1(epsilon);
  PairBound out;
  for (size_t i : order) {
    if (g[i] * (1 + out.b * lambda) < g_prime[i] * (1 + out.a * lambda)) break;
    out.a += g[i];
    out.b += g_prime[i];
    out.subset.push_back(i);
  }
  out.leakage = std::log1p(out.a * lambda) - std::log1p(out.b * lambda);
  return out;
}

absl::StatusOr<BoundedCplResult> ComputeCplBound(
    const ConditionalDistribution& cond, const BudgetParams& budget) {
  if (absl::Status s = ValidateBudget(budget); !s.ok()) return s;
  if (absl::Status s = CheckRows(cond); !s.ok()) return s;
  return MaximizeOverPairs(
      cond, budget, [&](std::span<const double> g, std::span<const double> gp) {
        return GreedyPairBound(g, gp, budget.epsilon);
      });
}

absl::StatusOr<BoundedCplResult> ComputeCplBoundBruteForce(
    const ConditionalDistribution& cond, const BudgetParams& budget) {
  if (absl::Status s = ValidateBudget(budget); !s.ok()) return s;
  if (absl::Status s = CheckRows(cond); !s.ok()) return s;
  if (cond.num_cols() > 20) {
    return absl::InvalidArgumentError(
        absl::StrFormat("brute force enumerates 2^t subsets; t=%d exceeds 20",
                        cond.num_cols()));
  }
  return MaximizeOverPairs(
      cond, budget, [&](std::span<const double> g, std::span<const double> gp) {
        return BruteForcePairBound(g, gp, budget.epsilon);
      });
}

absl::StatusOr<CplLimit> ComputeCplLimit(const ConditionalDistribution& cond) {
  if (absl::Status s = CheckRows(cond); !s.ok()) return s;
  CplLimit out;
  double best = 1.0;
  const std::vector<size_t> rows = PresentRows(cond);
  bool first = true;
  for (size_t x : rows) {
    for (size_t xp : rows) {
      if (x == xp) continue;
      if (first) {
        out.x = x;
        out.x_prime = xp;
        first = false;
      }
      for (size_t j = 0; j < cond.num_cols(); ++j) {
        double num = cond.at(x, j);
        double den = cond.at(xp, j);
        if (den == 0) {
          if (num > 0 && !out.infinite) {
            out.infinite = true;
            out.x = x;
            out.x_prime = xp;
          }
          continue;
        }
        if (num / den > best) {
          best = num / den;
          if (!out.infinite) {
            out.x = x;
            out.x_prime = xp;
          }
        }
      }
    }
  }
  out.value = std::log(best);
  return out;
}

std::optional<std::pair<size_t, size_t>> IsMaxAttainable(
    const ConditionalDistribution& cond) {
  const std::vector<size_t> rows = PresentRows(cond);
  for (size_t a = 0; a < rows.size(); ++a) {
    for (size_t b = a + 1; b < rows.size(); ++b) {
      bool disjoint = true;
      for (size_t j = 0; j < cond.num_cols() && disjoint; ++j) {
        disjoint = !(cond.at(rows[a], j) > 0 && cond.at(rows[b], j) > 0);
      }
      if (disjoint) return std::make_pair(rows[a], rows[b]);
    }
  }
  return std::nullopt;
}

}  // namespace cplkit

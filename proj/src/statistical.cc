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

#include "cplkit/statistical.h"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "absl/strings/str_format.h"
#include "cplkit/parallel.h"
#include "cplkit/rng.h"
#include "cplkit/status_macros.h"

namespace cplkit {
namespace {

absl::Status CheckAligned(const Dataset& perturbed, const Dataset& original,
                          size_t target, std::span<const size_t> neighbors) {
  if (perturbed.num_attributes() != original.num_attributes()) {
    return absl::InvalidArgumentError("datasets have different schemas");
  }
  const size_t n = original.num_records();
  if (n == 0 || perturbed.num_records() % n != 0) {
    return absl::InvalidArgumentError(
        "perturbed rows must be a whole multiple of the original rows");
  }
  if (target >= original.num_attributes()) {
    return absl::OutOfRangeError("target attribute out of range");
  }
  if (neighbors.empty()) {
    return absl::InvalidArgumentError("neighbour set is empty");
  }
  for (size_t z : neighbors) {
    if (z >= original.num_attributes()) {
      return absl::OutOfRangeError("neighbour attribute out of range");
    }
  }
  return absl::OkStatus();
}

// Mixed-radix code of the W tuple for every perturbed row.
struct EncodedW {
  std::vector<uint32_t> codes;
  size_t alphabet = 1;
};

absl::StatusOr<size_t> WAlphabetSize(const Dataset& d,
                                     std::span<const size_t> columns,
                                     size_t target_size) {
  size_t size = 1;
  for (size_t c : columns) {
    size *= d.attribute(c).alphabet.size();
    if (size * target_size > kMaxContingencyCells) {
      return absl::ResourceExhaustedError(absl::StrFormat(
          "contingency table over the neighbour tuple exceeds %d cells",
          kMaxContingencyCells));
    }
  }
  return size;
}

EncodedW Encode(const Dataset& d, std::span<const size_t> columns,
                const std::vector<std::span<const SymbolIndex>>& data) {
  EncodedW w;
  w.codes.assign(d.num_records(), 0);
  for (size_t c = 0; c < columns.size(); ++c) {
    const uint32_t radix = d.attribute(columns[c]).alphabet.size();
    for (size_t i = 0; i < w.codes.size(); ++i) {
      w.codes[i] = w.codes[i] * radix + data[c][i];
    }
    w.alphabet *= radix;
  }
  return w;
}

std::vector<std::span<const SymbolIndex>> ColumnSpans(
    const Dataset& d, std::span<const size_t> columns) {
  std::vector<std::span<const SymbolIndex>> out;
  for (size_t c : columns) out.push_back(d.column(c));
  return out;
}

absl::StatusOr<LeakageEstimate> LeakageFromCodes(
    std::span<const SymbolIndex> target_col, size_t target_size,
    const EncodedW& w) {
  const size_t n = target_col.size();
  std::vector<uint32_t> counts(w.alphabet * target_size, 0);
  std::vector<uint64_t> n_x(target_size, 0);
  for (size_t i = 0; i < w.codes.size(); ++i) {
    SymbolIndex x = target_col[i % n];
    ++counts[static_cast<size_t>(w.codes[i]) * target_size + x];
    ++n_x[x];
  }
  LeakageEstimate est;
  double best = 1.0;
  for (size_t code = 0; code < w.alphabet; ++code) {
    const uint32_t* row = &counts[code * target_size];
    double lo = 0, hi = 0;
    size_t positive = 0, zero = 0;
    for (size_t x = 0; x < target_size; ++x) {
      if (n_x[x] == 0) continue;
      if (row[x] == 0) {
        ++zero;
        continue;
      }
      double p = static_cast<double>(row[x]) / static_cast<double>(n_x[x]);
      if (positive == 0) {
        lo = hi = p;
      } else {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
      }
      ++positive;
    }
    if (positive == 0) continue;  // w never observed
    est.excluded_cells += zero;
    if (positive < 2) continue;
    ++est.admissible_outputs;
    best = std::max(best, hi / lo);
  }
  if (est.admissible_outputs == 0) {
    return absl::FailedPreconditionError(
        "insufficient data: no output value has two positive conditional "
        "counts");
  }
  est.leakage = std::log(best);
  return est;
}

absl::StatusOr<LeakageEstimate> LeakageOverColumns(
    const Dataset& perturbed, const Dataset& original, size_t target,
    std::span<const size_t> w_columns) {
  RETURN_IF_ERROR(CheckAligned(perturbed, original, target, w_columns));
  const size_t target_size = original.attribute(target).alphabet.size();
  RETURN_IF_ERROR(WAlphabetSize(perturbed, w_columns, target_size).status());
  EncodedW w = Encode(perturbed, w_columns, ColumnSpans(perturbed, w_columns));
  return LeakageFromCodes(original.column(target), target_size, w);
}

std::vector<SymbolIndex> ShuffledCopy(std::span<const SymbolIndex> column,
                                      Rng& rng) {
  std::vector<SymbolIndex> out(column.begin(), column.end());
  rng.Shuffle(std::span<SymbolIndex>(out));
  return out;
}

absl::StatusOr<double> PermutationPValue(const Dataset& perturbed,
                                         const Dataset& original, size_t target,
                                         std::span<const size_t> w_columns,
                                         double observed,
                                         const EstimationConfig& config) {
  RETURN_IF_ERROR(ValidateConfig(config));
  const size_t target_size = original.attribute(target).alphabet.size();
  RETURN_IF_ERROR(WAlphabetSize(perturbed, w_columns, target_size).status());
  const size_t surrogates = static_cast<size_t>(config.surrogates);
  std::vector<uint8_t> exceeds(surrogates, 0);
  ParallelFor(surrogates, config.threads, [&](size_t s) {
    Rng rng(DeriveSeed(config.seed, kStageSurrogate, s));
    std::vector<std::vector<SymbolIndex>> shuffled;
    std::vector<std::span<const SymbolIndex>> spans;
    shuffled.reserve(w_columns.size());
    for (size_t c : w_columns) {
      shuffled.push_back(ShuffledCopy(perturbed.column(c), rng));
      spans.emplace_back(shuffled.back());
    }
    EncodedW w = Encode(perturbed, w_columns, spans);
    absl::StatusOr<LeakageEstimate> est =
        LeakageFromCodes(original.column(target), target_size, w);
    // A surrogate with no admissible cell carries no evidence of leakage.
    double leakage = est.ok() ? est->leakage : 0.0;
    exceeds[s] = leakage >= observed ? 1 : 0;
  });
  size_t count = 0;
  for (uint8_t e : exceeds) count += e;
  return (1.0 + count) / (1.0 + surrogates);
}

absl::StatusOr<StatisticalCplResult> EstimateWithTest(
    const Dataset& perturbed, const Dataset& original, size_t target,
    std::span<const size_t> w_columns, const EstimationConfig& config) {
  ASSIGN_OR_RETURN(LeakageEstimate est,
                   LeakageOverColumns(perturbed, original, target, w_columns));
  ASSIGN_OR_RETURN(double p, PermutationPValue(perturbed, original, target,
                                               w_columns, est.leakage, config));
  StatisticalCplResult r;
  r.leakage = est.leakage;
  r.p_value = p;
  r.significant = p < config.alpha;
  r.excluded_cells = est.excluded_cells;
  return r;
}

absl::Status CheckNeighborsExcludeTarget(size_t target,
                                         std::span<const size_t> neighbors) {
  if (std::find(neighbors.begin(), neighbors.end(), target) !=
      neighbors.end()) {
    return absl::InvalidArgumentError(
        "neighbour set must not contain the target");
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateConfig(const EstimationConfig& config) {
  if (config.expansion < 1) {
    return absl::InvalidArgumentError("expansion r must be >= 1");
  }
  if (config.surrogates < 1) {
    return absl::InvalidArgumentError("surrogate count must be >= 1");
  }
  if (!(config.alpha > 0 && config.alpha < 1)) {
    return absl::InvalidArgumentError("alpha must lie in (0, 1)");
  }
  return absl::OkStatus();
}

absl::StatusOr<Dataset> PerturbDataset(const Dataset& dataset,
                                       std::span<const MechanismSpec> specs,
                                       const EstimationConfig& config) {
  RETURN_IF_ERROR(ValidateConfig(config));
  if (specs.size() != dataset.num_attributes()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%d mechanism specs for %d attributes", specs.size(),
                        dataset.num_attributes()));
  }
  for (size_t a = 0; a < specs.size(); ++a) {
    if (static_cast<size_t>(specs[a].k()) !=
        dataset.attribute(a).alphabet.size()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "mechanism for attribute '%s' has k=%d but the alphabet has %d "
          "symbols",
          dataset.attribute(a).name, specs[a].k(),
          dataset.attribute(a).alphabet.size()));
    }
  }
  const size_t n = dataset.num_records();
  const size_t rows = n * static_cast<size_t>(config.expansion);
  const size_t blocks = (rows + kPerturbBlockSize - 1) / kPerturbBlockSize;
  const size_t attrs = dataset.num_attributes();
  std::vector<std::vector<SymbolIndex>> columns(attrs,
                                                std::vector<SymbolIndex>(rows));
  std::mutex mu;
  absl::Status first_error;
  ParallelFor(attrs * blocks, config.threads, [&](size_t unit) {
    const size_t a = unit / blocks;
    const size_t b = unit % blocks;
    Rng rng(DeriveSeed(config.seed, kStagePerturb, a, b));
    std::span<const SymbolIndex> in = dataset.column(a);
    const size_t end = std::min(rows, (b + 1) * kPerturbBlockSize);
    for (size_t i = b * kPerturbBlockSize; i < end; ++i) {
      absl::StatusOr<PerturbedOutput> out = Perturb(specs[a], in[i % n], rng);
      absl::StatusOr<SymbolIndex> decoded =
          out.ok() ? Decode(specs[a], *out, rng) : out.status();
      if (!decoded.ok()) {
        std::lock_guard<std::mutex> lock(mu);
        if (first_error.ok()) first_error = decoded.status();
        return;
      }
      columns[a][i] = *decoded;
    }
  });
  RETURN_IF_ERROR(first_error);
  return Dataset::Create(dataset.schema(), std::move(columns));
}

absl::StatusOr<LeakageEstimate> EstimateLeakage(
    const Dataset& perturbed, const Dataset& original, size_t target,
    std::span<const size_t> neighbors) {
  RETURN_IF_ERROR(CheckNeighborsExcludeTarget(target, neighbors));
  return LeakageOverColumns(perturbed, original, target, neighbors);
}

absl::StatusOr<double> PermutationSignificance(
    const Dataset& perturbed, const Dataset& original, size_t target,
    std::span<const size_t> neighbors, const EstimationConfig& config) {
  ASSIGN_OR_RETURN(LeakageEstimate est,
                   EstimateLeakage(perturbed, original, target, neighbors));
  return PermutationPValue(perturbed, original, target, neighbors, est.leakage,
                           config);
}

absl::StatusOr<StatisticalCplResult> EstimateStatisticalCpl(
    const Dataset& perturbed, const Dataset& original, size_t target,
    std::span<const size_t> neighbors, const EstimationConfig& config) {
  RETURN_IF_ERROR(CheckNeighborsExcludeTarget(target, neighbors));
  return EstimateWithTest(perturbed, original, target, neighbors, config);
}

absl::StatusOr<StatisticalCplResult> EstimateStatisticalTpl(
    const Dataset& perturbed, const Dataset& original, size_t target,
    const EstimationConfig& config,
    std::optional<std::vector<size_t>> neighbors) {
  std::vector<size_t> w_columns{target};
  if (neighbors.has_value()) {
    RETURN_IF_ERROR(CheckNeighborsExcludeTarget(target, *neighbors));
    w_columns.insert(w_columns.end(), neighbors->begin(), neighbors->end());
  } else {
    for (size_t a = 0; a < original.num_attributes(); ++a) {
      if (a != target) w_columns.push_back(a);
    }
  }
  return EstimateWithTest(perturbed, original, target, w_columns, config);
}

absl::StatusOr<Dataset> BuildSurrogate(const Dataset& perturbed,
                                       std::span<const size_t> columns,
                                       uint64_t seed, uint64_t index) {
  std::vector<std::vector<SymbolIndex>> data;
  for (size_t a = 0; a < perturbed.num_attributes(); ++a) {
    std::span<const SymbolIndex> c = perturbed.column(a);
    data.emplace_back(c.begin(), c.end());
  }
  Rng rng(DeriveSeed(seed, kStageSurrogate, index));
  for (size_t c : columns) {
    if (c >= perturbed.num_attributes()) {
      return absl::OutOfRangeError("surrogate column out of range");
    }
    data[c] = ShuffledCopy(perturbed.column(c), rng);
  }
  return Dataset::Create(perturbed.schema(), std::move(data));
}

}  // namespace cplkit

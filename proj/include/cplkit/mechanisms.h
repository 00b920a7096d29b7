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

#ifndef CPLKIT_MECHANISMS_H_
#define CPLKIT_MECHANISMS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cplkit/data_model.h"
#include "cplkit/rng.h"

namespace cplkit {

enum class MechanismKind { kGrr, kExp, kRappor, kOue, kBlh, kOlh, kShe, kSs };

inline constexpr MechanismKind kAllMechanisms[] = {
    MechanismKind::kGrr, MechanismKind::kExp, MechanismKind::kRappor,
    MechanismKind::kOue, MechanismKind::kBlh, MechanismKind::kOlh,
    MechanismKind::kShe, MechanismKind::kSs};

// Lower-case CLI / JSON name ("grr", "exp", ...).
const char* MechanismName(MechanismKind kind);
absl::StatusOr<MechanismKind> ParseMechanismKind(std::string_view name);

// Two-step RAPPOR randomization: permanent flip f, then instantaneous report
// probabilities p (bit 0) and q (bit 1).
struct RapporParams {
  double f = 0.5;
  double p = 0.5;
  double q = 0.75;
};

// One LDP mechanism over a domain of size k. All eight kinds are pure LDP,
// so delta is carried but always 0 for generated specs.
class MechanismSpec {
 public:
  static absl::StatusOr<MechanismSpec> Create(MechanismKind kind,
                                              double epsilon, int k,
                                              double delta = 0.0,
                                              RapporParams rappor = {});

  MechanismKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  int k() const { return k_; }
  const RapporParams& rappor() const { return rappor_; }

  // Hash range g: 2 for BLH, round(e^eps) + 1 for OLH.
  int hash_range() const;
  // Reported subset size for SS: max(1, floor(k / (e^eps + 1))).
  int subset_size() const;
  // Probability the true value is kept (GRR, EXP) or included (SS).
  double keep_probability() const;

 private:
  MechanismSpec(MechanismKind kind, double epsilon, double delta, int k,
                RapporParams rappor)
      : kind_(kind), epsilon_(epsilon), delta_(delta), k_(k), rappor_(rappor) {}

  MechanismKind kind_;
  double epsilon_;
  double delta_;
  int k_;
  RapporParams rappor_;
};

struct SymbolReport {
  SymbolIndex value;
};
struct BitVectorReport {
  std::vector<uint8_t> bits;
};
struct HashedReport {
  uint64_t hash_key;
  uint32_t value;
};
struct RealVectorReport {
  std::vector<double> values;
};
struct SubsetReport {
  std::vector<SymbolIndex> members;
};

// Mechanism output: symbol (GRR, EXP), bit vector (RAPPOR, OUE), keyed hash
// report (BLH, OLH), noisy vector (SHE) or subset (SS).
using PerturbedOutput =
    std::variant<SymbolReport, BitVectorReport, HashedReport, RealVectorReport,
                 SubsetReport>;

absl::StatusOr<PerturbedOutput> Perturb(const MechanismSpec& spec,
                                        SymbolIndex value, Rng& rng);

// Keyed 64-bit universal hash used by BLH and OLH, reduced mod g.
uint32_t LocalHash(uint64_t key, SymbolIndex value, int g);

// Row-stochastic p(output | input) table.
class TransitionMatrix {
 public:
  static absl::StatusOr<TransitionMatrix> Create(size_t inputs, size_t outputs,
                                                 std::vector<double> values);

  size_t num_inputs() const { return inputs_; }
  size_t num_outputs() const { return outputs_; }
  double at(size_t input, size_t output) const {
    return values_[input * outputs_ + output];
  }

  // Pure LDP on single outputs: in every output column the largest entry is
  // at most e^epsilon times the smallest (relative slack 1e-9).
  bool SatisfiesPureLdp(double epsilon) const;

 private:
  TransitionMatrix(size_t inputs, size_t outputs, std::vector<double> values)
      : inputs_(inputs), outputs_(outputs), values_(std::move(values)) {}

  size_t inputs_;
  size_t outputs_;
  std::vector<double> values_;
};

// Only GRR and EXP have tractable transition matrices; other kinds return
// UnimplementedError pointing to the bound or statistical paths.
absl::StatusOr<TransitionMatrix> TransitionMatrixFor(const MechanismSpec& spec);

// Attribute inference from a perturbed output back into the input alphabet.
// `prior` is used by SHE only and defaults to uniform.
absl::StatusOr<SymbolIndex> Decode(
    const MechanismSpec& spec, const PerturbedOutput& output, Rng& rng,
    const std::optional<ProbabilityVector>& prior = std::nullopt);

// Standard unbiased frequency estimator for each kind, clipped to [0, 1] and
// renormalized.
absl::StatusOr<ProbabilityVector> EstimateFrequencies(
    const MechanismSpec& spec, std::span<const PerturbedOutput> outputs);

}  // namespace cplkit

#endif  // CPLKIT_MECHANISMS_H_

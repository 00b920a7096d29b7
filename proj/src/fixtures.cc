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

#include "cplkit/fixtures.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "cplkit/rng.h"
#include "cplkit/status_macros.h"

namespace cplkit {
namespace {

// Fixture identifiers mixed into DeriveSeed.
enum FixtureId : uint64_t {
  kAsymmetricPair = 1,
  kIndependent,
  kCopy,
  kWeak,
  kMixed,
  kChain,
  kCluster,
};

absl::StatusOr<Alphabet> NumberedAlphabet(const std::string& prefix, int k) {
  std::vector<std::string> symbols;
  for (int i = 1; i <= k; ++i) symbols.push_back(absl::StrCat(prefix, i));
  return Alphabet::Create(std::move(symbols));
}

SymbolIndex NoisyCopy(Rng& rng, SymbolIndex source, double rho, int k) {
  if (rng.Bernoulli(rho)) return source;
  return static_cast<SymbolIndex>(rng.Below(k));
}

// Builds a dataset of `sizes.size()` attributes named a0, a1, ... with
// symbols s1..sk.
absl::StatusOr<Dataset> Assemble(const std::vector<int>& sizes,
                                 std::vector<std::vector<SymbolIndex>> cols) {
  std::vector<Attribute> schema;
  for (size_t a = 0; a < sizes.size(); ++a) {
    ASSIGN_OR_RETURN(Alphabet alphabet, NumberedAlphabet("s", sizes[a]));
    schema.push_back(Attribute{absl::StrCat("a", a), std::move(alphabet)});
  }
  return Dataset::Create(std::move(schema), std::move(cols));
}

}  // namespace

absl::StatusOr<JointDistribution> AsymmetricPairJoint() {
  return JointDistribution::Create(4, 4,
                                   {.2, 0, 0, 0,        //
                                    0, .2, 0, 0,        //
                                    .1, .15, .03, .02,  //
                                    .1, .15, .03, .02},
                                   {"p1", "p2", "p3", "p4"},
                                   {"n1", "n2", "n3", "n4"});
}

absl::StatusOr<Dataset> SampleFromJoint(const JointDistribution& joint,
                                        size_t n, uint64_t seed,
                                        const std::string& row_name,
                                        const std::string& col_name) {
  Rng rng(seed);
  const std::vector<double>& p = joint.values();
  std::vector<double> cdf(p.size());
  double acc = 0;
  for (size_t c = 0; c < p.size(); ++c) cdf[c] = acc += p[c];
  std::vector<SymbolIndex> rows(n), cols(n);
  for (size_t i = 0; i < n; ++i) {
    const double u = rng.Uniform() * acc;
    size_t c = 0;
    while (c + 1 < p.size() && (cdf[c] <= u || p[c] == 0)) ++c;
    rows[i] = static_cast<SymbolIndex>(c / joint.cols());
    cols[i] = static_cast<SymbolIndex>(c % joint.cols());
  }
  ASSIGN_OR_RETURN(Alphabet row_alphabet, Alphabet::Create(joint.row_labels()));
  ASSIGN_OR_RETURN(Alphabet col_alphabet, Alphabet::Create(joint.col_labels()));
  return Dataset::Create({Attribute{row_name, std::move(row_alphabet)},
                          Attribute{col_name, std::move(col_alphabet)}},
                         {std::move(rows), std::move(cols)});
}

absl::StatusOr<Dataset> AsymmetricPairFixture(uint64_t seed, size_t n) {
  ASSIGN_OR_RETURN(JointDistribution joint, AsymmetricPairJoint());
  return SampleFromJoint(joint, n,
                         DeriveSeed(seed, kStageFixture, kAsymmetricPair),
                         "primary", "neighbour");
}

absl::StatusOr<Dataset> IndependentFixture(uint64_t seed, size_t copies) {
  std::vector<std::pair<SymbolIndex, SymbolIndex>> rows;
  rows.reserve(4 * copies);
  for (size_t c = 0; c < copies; ++c) {
    for (SymbolIndex a = 0; a < 2; ++a) {
      for (SymbolIndex b = 0; b < 2; ++b) rows.emplace_back(a, b);
    }
  }
  Rng rng(DeriveSeed(seed, kStageFixture, kIndependent));
  rng.Shuffle(std::span(rows));
  std::vector<std::vector<SymbolIndex>> cols(2);
  for (const auto& [a, b] : rows) {
    cols[0].push_back(a);
    cols[1].push_back(b);
  }
  return Assemble({2, 2}, std::move(cols));
}

absl::StatusOr<Dataset> CopyFixture(uint64_t seed, size_t n, int k) {
  Rng rng(DeriveSeed(seed, kStageFixture, kCopy));
  std::vector<SymbolIndex> source(n);
  for (SymbolIndex& v : source) v = static_cast<SymbolIndex>(rng.Below(k));
  return Assemble({k, k}, {source, source});
}

absl::StatusOr<Dataset> WeakCorrelationFixture(uint64_t seed, size_t n,
                                               size_t attributes) {
  Rng rng(DeriveSeed(seed, kStageFixture, kWeak));
  std::vector<std::vector<SymbolIndex>> cols(attributes,
                                             std::vector<SymbolIndex>(n));
  for (size_t i = 0; i < n; ++i) {
    const SymbolIndex z = static_cast<SymbolIndex>(rng.Below(2));
    for (size_t a = 0; a < attributes; ++a) {
      cols[a][i] = NoisyCopy(rng, z, 0.15, 2);
    }
  }
  return Assemble(std::vector<int>(attributes, 2), std::move(cols));
}

absl::StatusOr<Dataset> MixedCorrelationFixture(uint64_t seed, size_t n) {
  Rng rng(DeriveSeed(seed, kStageFixture, kMixed));
  std::vector<std::vector<SymbolIndex>> cols(6, std::vector<SymbolIndex>(n));
  for (size_t i = 0; i < n; ++i) {
    const SymbolIndex a0 = static_cast<SymbolIndex>(rng.Below(2));
    cols[0][i] = a0;
    cols[1][i] = NoisyCopy(rng, a0, 0.9, 2);
    cols[2][i] = NoisyCopy(rng, a0, 0.5, 2);
    cols[3][i] = static_cast<SymbolIndex>(rng.Below(2));
    const SymbolIndex a4 = static_cast<SymbolIndex>(rng.Below(3));
    cols[4][i] = a4;
    cols[5][i] = NoisyCopy(rng, a4 == 0 ? 1 : 0, 0.8, 2);
  }
  return Assemble({2, 2, 2, 2, 3, 2}, std::move(cols));
}

absl::StatusOr<Dataset> ChainFixture(uint64_t seed, size_t n) {
  Rng rng(DeriveSeed(seed, kStageFixture, kChain));
  std::vector<std::vector<SymbolIndex>> cols(5, std::vector<SymbolIndex>(n));
  for (size_t i = 0; i < n; ++i) {
    const SymbolIndex a0 = static_cast<SymbolIndex>(rng.Below(3));
    const SymbolIndex a1 = NoisyCopy(rng, a0, 0.7, 3);
    const SymbolIndex a2 = NoisyCopy(rng, a1, 0.7, 3);
    cols[0][i] = a0;
    cols[1][i] = a1;
    cols[2][i] = a2;
    cols[3][i] = NoisyCopy(rng, a2 == 0 ? 1 : 0, 0.7, 2);
    cols[4][i] = NoisyCopy(rng, a0, 0.6, 4);
  }
  return Assemble({3, 3, 3, 2, 4}, std::move(cols));
}

absl::StatusOr<Dataset> ClusterFixture(uint64_t seed, size_t n) {
  Rng rng(DeriveSeed(seed, kStageFixture, kCluster));
  const double strength[] = {0.8, 0.6, 0.5, 0.7, 0.4};
  std::vector<std::vector<SymbolIndex>> cols(5, std::vector<SymbolIndex>(n));
  for (size_t i = 0; i < n; ++i) {
    const SymbolIndex z = static_cast<SymbolIndex>(rng.Below(4));
    for (size_t a = 0; a < 5; ++a)
      cols[a][i] = NoisyCopy(rng, z, strength[a], 4);
  }
  return Assemble({4, 4, 4, 4, 4}, std::move(cols));
}

absl::StatusOr<std::vector<NamedFixture>> AllFixtures(uint64_t seed) {
  std::vector<NamedFixture> out;
  ASSIGN_OR_RETURN(Dataset asym, AsymmetricPairFixture(seed));
  out.push_back({"asymmetric_pair", std::move(asym)});
  ASSIGN_OR_RETURN(Dataset indep, IndependentFixture(seed));
  out.push_back({"independent", std::move(indep)});
  ASSIGN_OR_RETURN(Dataset copy, CopyFixture(seed));
  out.push_back({"copy", std::move(copy)});
  ASSIGN_OR_RETURN(Dataset weak, WeakCorrelationFixture(seed));
  out.push_back({"weak_correlation", std::move(weak)});
  ASSIGN_OR_RETURN(Dataset mixed, MixedCorrelationFixture(seed));
  out.push_back({"mixed_correlation", std::move(mixed)});
  ASSIGN_OR_RETURN(Dataset chain, ChainFixture(seed));
  out.push_back({"chain5", std::move(chain)});
  ASSIGN_OR_RETURN(Dataset cluster, ClusterFixture(seed));
  out.push_back({"cluster5", std::move(cluster)});
  return out;
}

}  // namespace cplkit

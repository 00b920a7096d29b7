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

#include "cplkit/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cplkit/rng.h"
#include "gtest/gtest.h"

namespace cplkit {
namespace {

MechanismSpec Spec(MechanismKind kind, double epsilon, int k) {
  auto spec = MechanismSpec::Create(kind, epsilon, k);
  EXPECT_TRUE(spec.ok()) << spec.status();
  return *spec;
}

// Draws n values from `freq` deterministically by rounding cumulative mass.
std::vector<SymbolIndex> ValuesWithFrequencies(const std::vector<double>& freq,
                                               size_t n) {
  std::vector<SymbolIndex> out;
  double acc = 0;
  for (size_t v = 0; v < freq.size(); ++v) {
    acc += freq[v];
    size_t target = static_cast<size_t>(std::llround(acc * n));
    while (out.size() < target) out.push_back(static_cast<SymbolIndex>(v));
  }
  return out;
}

double LInf(const ProbabilityVector& a, const std::vector<double>& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TEST(MechanismSpecTest, ValidatesParameters) {
  EXPECT_FALSE(MechanismSpec::Create(MechanismKind::kGrr, 1, 1).ok());
  EXPECT_FALSE(MechanismSpec::Create(MechanismKind::kSs, 1, 1).ok());
  EXPECT_TRUE(MechanismSpec::Create(MechanismKind::kOue, 1, 1).ok());
  EXPECT_FALSE(MechanismSpec::Create(MechanismKind::kGrr, -1, 2).ok());
  EXPECT_FALSE(MechanismSpec::Create(MechanismKind::kGrr, 1, 2, 1.0).ok());
  EXPECT_FALSE(MechanismSpec::Create(MechanismKind::kOlh, 30, 4).ok());
}

TEST(MechanismSpecTest, NamesRoundTrip) {
  for (MechanismKind kind : kAllMechanisms) {
    auto parsed = ParseMechanismKind(MechanismName(kind));
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(*parsed, kind);
  }
  EXPECT_EQ(*ParseMechanismKind("GRR"), MechanismKind::kGrr);
  EXPECT_FALSE(ParseMechanismKind("laplace").ok());
}

TEST(MechanismSpecTest, DerivedParameters) {
  EXPECT_DOUBLE_EQ(
      Spec(MechanismKind::kGrr, std::log(3.0), 2).keep_probability(), 0.75);
  EXPECT_EQ(Spec(MechanismKind::kSs, 1.0, 10).subset_size(), 2);
  EXPECT_EQ(Spec(MechanismKind::kSs, 5.0, 4).subset_size(), 1);
  EXPECT_EQ(Spec(MechanismKind::kBlh, 3.0, 4).hash_range(), 2);
  EXPECT_EQ(Spec(MechanismKind::kOlh, 1.0, 4).hash_range(), 4);
  const double w = 2, e = std::exp(1.0);
  EXPECT_NEAR(Spec(MechanismKind::kSs, 1.0, 10).keep_probability(),
              w * e / (w * e + 10 - w), 1e-15);
}

TEST(TransitionMatrixTest, GrrAndExpClosedForms) {
  auto grr = TransitionMatrixFor(Spec(MechanismKind::kGrr, std::log(3.0), 2));
  ASSERT_TRUE(grr.ok());
  EXPECT_NEAR(grr->at(0, 0), 0.75, 1e-15);
  EXPECT_NEAR(grr->at(0, 1), 0.25, 1e-15);
  EXPECT_NEAR(grr->at(1, 0), 0.25, 1e-15);

  auto exp = TransitionMatrixFor(Spec(MechanismKind::kExp, 2.0, 3));
  ASSERT_TRUE(exp.ok());
  const double e = std::exp(1.0);
  EXPECT_NEAR(exp->at(1, 1), e / (e + 2), 1e-12);
  EXPECT_NEAR(exp->at(1, 1), 0.5761, 1e-4);
  EXPECT_NEAR(exp->at(1, 2), 0.2119, 1e-4);
}

TEST(TransitionMatrixTest, OtherKindsAreUnimplemented) {
  for (MechanismKind kind :
       {MechanismKind::kRappor, MechanismKind::kOue, MechanismKind::kBlh,
        MechanismKind::kOlh, MechanismKind::kShe, MechanismKind::kSs}) {
    EXPECT_EQ(TransitionMatrixFor(Spec(kind, 1.0, 4)).status().code(),
              absl::StatusCode::kUnimplemented);
  }
}

TEST(TransitionMatrixTest, PureLdpCheck) {
  for (double eps : {0.0, 0.3, 1.0, 4.0}) {
    for (int k : {2, 3, 7}) {
      for (MechanismKind kind : {MechanismKind::kGrr, MechanismKind::kExp}) {
        auto t = TransitionMatrixFor(Spec(kind, eps, k));
        ASSERT_TRUE(t.ok());
        EXPECT_TRUE(t->SatisfiesPureLdp(eps));
      }
    }
  }
  auto tight = TransitionMatrixFor(Spec(MechanismKind::kGrr, 2.0, 3));
  EXPECT_FALSE(tight->SatisfiesPureLdp(1.9));
  auto with_zero = TransitionMatrix::Create(2, 2, {1, 0, 0.5, 0.5});
  ASSERT_TRUE(with_zero.ok());
  EXPECT_FALSE(with_zero->SatisfiesPureLdp(10));
  EXPECT_FALSE(TransitionMatrix::Create(1, 2, {0.5, 0.6}).ok());
}

TEST(PerturbTest, RejectsOutOfRangeValue) {
  Rng rng(1);
  EXPECT_FALSE(Perturb(Spec(MechanismKind::kGrr, 1, 3), 3, rng).ok());
}

TEST(PerturbTest, EmpiricalTransitionsMatchMatrixWithinFourSigma) {
  const int draws = 100000;
  for (MechanismKind kind : {MechanismKind::kGrr, MechanismKind::kExp}) {
    for (double eps : {0.5, 2.0}) {
      for (int k : {2, 4}) {
        MechanismSpec spec = Spec(kind, eps, k);
        auto t = TransitionMatrixFor(spec);
        ASSERT_TRUE(t.ok());
        for (int x = 0; x < k; ++x) {
          Rng rng(DeriveSeed(7, kind == MechanismKind::kGrr, k, x));
          std::vector<int> counts(k, 0);
          for (int i = 0; i < draws; ++i) {
            auto out = Perturb(spec, x, rng);
            ASSERT_TRUE(out.ok());
            ++counts[std::get<SymbolReport>(*out).value];
          }
          for (int y = 0; y < k; ++y) {
            const double p = t->at(x, y);
            const double sigma = std::sqrt(p * (1 - p) / draws);
            EXPECT_NEAR(counts[y] / double(draws), p, 4 * sigma + 1e-12)
                << MechanismName(kind) << " eps=" << eps << " k=" << k;
          }
        }
      }
    }
  }
}

TEST(PerturbTest, GrrAtZeroEpsilonIsUniform) {
  MechanismSpec spec = Spec(MechanismKind::kGrr, 0.0, 4);
  Rng rng(11);
  const int draws = 100000;
  std::vector<int> counts(4, 0);
  for (int i = 0; i < draws; ++i) {
    ++counts[std::get<SymbolReport>(*Perturb(spec, 2, rng)).value];
  }
  const double sigma = std::sqrt(0.25 * 0.75 / draws);
  for (int c : counts) EXPECT_NEAR(c / double(draws), 0.25, 3 * sigma);
}

TEST(PerturbTest, OutputShapesMatchKind) {
  Rng rng(3);
  const int k = 6;
  for (MechanismKind kind : kAllMechanisms) {
    MechanismSpec spec = Spec(kind, 1.0, k);
    auto out = Perturb(spec, 4, rng);
    ASSERT_TRUE(out.ok()) << MechanismName(kind);
    switch (kind) {
      case MechanismKind::kRappor:
      case MechanismKind::kOue:
        EXPECT_EQ(std::get<BitVectorReport>(*out).bits.size(), size_t{k});
        break;
      case MechanismKind::kShe:
        EXPECT_EQ(std::get<RealVectorReport>(*out).values.size(), size_t{k});
        break;
      case MechanismKind::kSs:
        EXPECT_EQ(std::get<SubsetReport>(*out).members.size(),
                  size_t(spec.subset_size()));
        break;
      case MechanismKind::kBlh:
      case MechanismKind::kOlh:
        EXPECT_LT(std::get<HashedReport>(*out).value,
                  uint32_t(spec.hash_range()));
        break;
      default:
        EXPECT_LT(std::get<SymbolReport>(*out).value, SymbolIndex(k));
    }
  }
}

TEST(PerturbTest, SubsetSamplingIncludesTrueValueAtKeepRate) {
  MechanismSpec spec = Spec(MechanismKind::kSs, 1.0, 10);
  Rng rng(5);
  const int draws = 100000;
  int included = 0;
  for (int i = 0; i < draws; ++i) {
    auto s = std::get<SubsetReport>(*Perturb(spec, 7, rng)).members;
    ASSERT_EQ(s.size(), 2u);
    ASSERT_NE(s[0], s[1]);
    included += std::count(s.begin(), s.end(), SymbolIndex{7});
  }
  const double p = spec.keep_probability();
  EXPECT_NEAR(included / double(draws), p, 4 * std::sqrt(p * (1 - p) / draws));
}

TEST(PerturbTest, SameSeedSameOutputs) {
  for (MechanismKind kind : kAllMechanisms) {
    MechanismSpec spec = Spec(kind, 1.5, 5);
    Rng a(99), b(99);
    for (int i = 0; i < 50; ++i) {
      EXPECT_EQ(Perturb(spec, i % 5, a)->index(),
                Perturb(spec, i % 5, b)->index());
    }
    Rng c(99), d(99);
    auto oc = Perturb(spec, 1, c);
    auto od = Perturb(spec, 1, d);
    EXPECT_EQ(*Decode(spec, *oc, c), *Decode(spec, *od, d));
  }
}

TEST(DecodeTest, GrrIsIdentityOnPayload) {
  MechanismSpec spec = Spec(MechanismKind::kGrr, 1.0, 4);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    auto out = Perturb(spec, i % 4, rng);
    EXPECT_EQ(*Decode(spec, *out, rng), std::get<SymbolReport>(*out).value);
  }
}

TEST(DecodeTest, UnaryEncodingSingleBitAndEmpty) {
  MechanismSpec spec = Spec(MechanismKind::kOue, 1.0, 5);
  Rng rng(2);
  PerturbedOutput one = BitVectorReport{{0, 0, 0, 1, 0}};
  EXPECT_EQ(*Decode(spec, one, rng), 3u);
  PerturbedOutput none = BitVectorReport{{0, 0, 0, 0, 0}};
  std::vector<int> counts(5, 0);
  const int draws = 50000;
  for (int i = 0; i < draws; ++i) ++counts[*Decode(spec, none, rng)];
  const double sigma = std::sqrt(0.2 * 0.8 / draws);
  for (int c : counts) EXPECT_NEAR(c / double(draws), 0.2, 4 * sigma);
}

TEST(DecodeTest, HashedReportsDecodeIntoPreimage) {
  for (MechanismKind kind : {MechanismKind::kBlh, MechanismKind::kOlh}) {
    MechanismSpec spec = Spec(kind, 2.0, 8);
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
      auto out = Perturb(spec, i % 8, rng);
      const auto& h = std::get<HashedReport>(*out);
      SymbolIndex v = *Decode(spec, *out, rng);
      bool preimage_empty = true;
      for (int u = 0; u < 8; ++u) {
        if (LocalHash(h.hash_key, u, spec.hash_range()) == h.value) {
          preimage_empty = false;
        }
      }
      if (!preimage_empty) {
        EXPECT_EQ(LocalHash(h.hash_key, v, spec.hash_range()), h.value);
      }
    }
  }
}

TEST(DecodeTest, SubsetDecodesToMember) {
  MechanismSpec spec = Spec(MechanismKind::kSs, 0.5, 12);
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    auto out = Perturb(spec, i % 12, rng);
    const auto& m = std::get<SubsetReport>(*out).members;
    SymbolIndex v = *Decode(spec, *out, rng);
    EXPECT_NE(std::find(m.begin(), m.end(), v), m.end());
  }
}

TEST(DecodeTest, SheArgmaxAndZeroEpsilonError) {
  MechanismSpec spec = Spec(MechanismKind::kShe, 1.0, 4);
  Rng rng(8);
  PerturbedOutput y = RealVectorReport{{0.01, -0.02, 1.03, 0.0}};
  EXPECT_EQ(*Decode(spec, y, rng), 2u);
  // A strong prior overrides a weak likelihood difference.
  ProbabilityVector prior{0.97, 0.01, 0.01, 0.01};
  PerturbedOutput ambiguous = RealVectorReport{{0.4, 0.0, 0.6, 0.0}};
  EXPECT_EQ(*Decode(spec, ambiguous, rng, prior), 0u);

  MechanismSpec zero = Spec(MechanismKind::kShe, 0.0, 4);
  EXPECT_FALSE(Decode(zero, y, rng).ok());
  EXPECT_FALSE(Perturb(zero, 1, rng).ok());
}

TEST(DecodeTest, ShapeMismatchIsAnError) {
  Rng rng(1);
  PerturbedOutput wrong = BitVectorReport{{1, 0}};
  EXPECT_FALSE(Decode(Spec(MechanismKind::kGrr, 1, 2), wrong, rng).ok());
  EXPECT_FALSE(Decode(Spec(MechanismKind::kOue, 1, 3), wrong, rng).ok());
}

TEST(EstimateFrequenciesTest, GrrLargeEpsilon) {
  const std::vector<double> truth{0.5, 0.3, 0.2};
  MechanismSpec spec = Spec(MechanismKind::kGrr, 10.0, 3);
  Rng rng(21);
  std::vector<PerturbedOutput> outs;
  for (SymbolIndex v : ValuesWithFrequencies(truth, 100000)) {
    outs.push_back(*Perturb(spec, v, rng));
  }
  auto est = EstimateFrequencies(spec, outs);
  ASSERT_TRUE(est.ok());
  EXPECT_LT(LInf(*est, truth), 0.02);
}

TEST(EstimateFrequenciesTest, EveryMechanismIsCloseAtModerateEpsilon) {
  const std::vector<double> truth{0.4, 0.3, 0.2, 0.1};
  for (MechanismKind kind : kAllMechanisms) {
    MechanismSpec spec = Spec(kind, 4.0, 4);
    Rng rng(DeriveSeed(31, static_cast<uint64_t>(kind)));
    std::vector<PerturbedOutput> outs;
    for (SymbolIndex v : ValuesWithFrequencies(truth, 100000)) {
      outs.push_back(*Perturb(spec, v, rng));
    }
    auto est = EstimateFrequencies(spec, outs);
    ASSERT_TRUE(est.ok());
    EXPECT_NEAR(std::accumulate(est->begin(), est->end(), 0.0), 1.0, 1e-12);
    // RAPPOR's fixed (f, p, q) give a weak signal (p1 - p0 = 0.125).
    const double tol = kind == MechanismKind::kRappor ? 0.05 : 0.02;
    EXPECT_LT(LInf(*est, truth), tol) << MechanismName(kind);
  }
}

TEST(EstimateFrequenciesTest, SingleOutputSumsToOne) {
  MechanismSpec spec = Spec(MechanismKind::kGrr, 2.0, 4);
  std::vector<PerturbedOutput> outs{SymbolReport{1}};
  auto est = EstimateFrequencies(spec, outs);
  ASSERT_TRUE(est.ok());
  EXPECT_NEAR(std::accumulate(est->begin(), est->end(), 0.0), 1.0, 1e-12);
  EXPECT_EQ(std::max_element(est->begin(), est->end()) - est->begin(), 1);
  EXPECT_FALSE(EstimateFrequencies(spec, {}).ok());
}

TEST(EstimateFrequenciesTest, ZeroEpsilonFallsBackToUniform) {
  MechanismSpec spec = Spec(MechanismKind::kGrr, 0.0, 4);
  std::vector<PerturbedOutput> outs{SymbolReport{1}, SymbolReport{1}};
  auto est = EstimateFrequencies(spec, outs);
  ASSERT_TRUE(est.ok());
  for (double f : *est) EXPECT_DOUBLE_EQ(f, 0.25);
}

TEST(EstimateFrequenciesTest, ErrorHalvesWhenSamplesQuadruple) {
  const std::vector<double> truth{0.4, 0.3, 0.2, 0.1};
  MechanismSpec spec = Spec(MechanismKind::kGrr, 1.0, 4);
  auto mean_error = [&](size_t n) {
    double total = 0;
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
      Rng rng(DeriveSeed(41, n, s));
      std::vector<PerturbedOutput> outs;
      for (SymbolIndex v : ValuesWithFrequencies(truth, n)) {
        outs.push_back(*Perturb(spec, v, rng));
      }
      total += LInf(*EstimateFrequencies(spec, outs), truth);
    }
    return total / seeds;
  };
  const double ratio = mean_error(8000) / mean_error(2000);
  EXPECT_GT(ratio, 0.5 * 0.7);
  EXPECT_LT(ratio, 0.5 * 1.3);
}

}  // namespace
}  // namespace cplkit

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

#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace cplkit {
namespace {

TEST(SequentialComposeTest, SumsComponents) {
  std::vector<LeakagePair> parts{{1.0, 0.01}, {0.2, 0.02}, {0.1, 0.0}};
  auto r = SequentialCompose(parts);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->leakage, 1.3, 1e-12);
  EXPECT_NEAR(r->relaxation, 0.03, 1e-15);
  EXPECT_FALSE(r->relaxation_overflow);
  EXPECT_FALSE(SequentialCompose({}).ok());
}

TEST(SequentialComposeTest, Associative) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    LeakagePair a{rng.Uniform(), 0.1 * rng.Uniform()};
    LeakagePair b{rng.Uniform(), 0.1 * rng.Uniform()};
    LeakagePair c{rng.Uniform(), 0.1 * rng.Uniform()};
    std::vector<LeakagePair> ab{a, b};
    std::vector<LeakagePair> bc{b, c};
    std::vector<LeakagePair> left{*SequentialCompose(ab), c};
    std::vector<LeakagePair> right{a, *SequentialCompose(bc)};
    auto l = *SequentialCompose(left);
    auto r = *SequentialCompose(right);
    EXPECT_NEAR(l.leakage, r.leakage, 1e-12);
    EXPECT_NEAR(l.relaxation, r.relaxation, 1e-12);
  }
}

TEST(SequentialComposeTest, RelaxationOverflowIsClampedAndFlagged) {
  std::vector<LeakagePair> parts{{1, 0.6}, {1, 0.5}};
  auto r = SequentialCompose(parts);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->relaxation_overflow);
  EXPECT_EQ(r->relaxation, kMaxRelaxation);
  EXPECT_LT(r->relaxation, 1.0);
}

TEST(SequentialComposeTest, InfinityPropagates) {
  std::vector<LeakagePair> parts{
      {1, 0}, {std::numeric_limits<double>::infinity(), 0, true}};
  auto r = SequentialCompose(parts);
  EXPECT_TRUE(r->infinite);
  EXPECT_TRUE(std::isinf(r->leakage));
}

TEST(TplUpperBoundTest, Examples) {
  std::vector<LeakagePair> cpl{{0.2, 0}, {0.1, 0}};
  LeakagePair r = TplUpperBound({1.0, 0}, cpl);
  EXPECT_NEAR(r.leakage, 1.3, 1e-12);
  EXPECT_EQ(r.relaxation, 0.0);
  LeakagePair own{0.7, 0.001};
  EXPECT_EQ(TplUpperBound(own, {}), own);
}

TEST(CplMatrixTest, TcplExamples) {
  CplMatrix zero({"a", "b", "c"});
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = 0; j < 3; ++j) {
      if (i != j) zero.Set(i, j, {0, 0});
    }
  }
  EXPECT_EQ(*Tcpl(zero), 0.0);

  CplMatrix two({"a", "b"});
  two.Set(0, 1, {0.3, 0});
  two.Set(1, 0, {0.1, 0});
  EXPECT_NEAR(*Tcpl(two), 0.4, 1e-12);
}

TEST(CplMatrixTest, AsymmetricPairTcpl) {
  CplMatrix m({"primary", "neighbour"});
  auto forward = ComputeCplBound(testing::AsymmetricRowsCond(), {1.0, 0});
  auto backward = ComputeCplBound(testing::AsymmetricColumnsCond(), {1.0, 0});
  m.Set(0, 1, {forward->leakage, forward->relaxation});
  m.Set(1, 0, {backward->leakage, backward->relaxation});
  EXPECT_NEAR(*Tcpl(m), 1.6203, 1e-3);
}

TEST(CplMatrixTest, MissingEntryIsAnErrorAndInfinityDominates) {
  CplMatrix m({"a", "b"});
  m.Set(0, 1, {0.3, 0});
  EXPECT_FALSE(Tcpl(m).ok());
  m.Set(1, 0, {std::numeric_limits<double>::infinity(), 0, true});
  auto t = Tcpl(m);
  ASSERT_TRUE(t.ok());
  EXPECT_TRUE(std::isinf(*t));
}

TEST(CplMatrixTest, TplFromRow) {
  CplMatrix m({"a", "b", "c"});
  m.Set(0, 1, {0.2, 0});
  m.Set(0, 2, {0.1, 0});
  auto r = TplFromMatrix(m, 0, {1.0, 0});
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->leakage, 1.3, 1e-12);
  EXPECT_FALSE(TplFromMatrix(m, 1, {1.0, 0}).ok());
}

}  // namespace
}  // namespace cplkit

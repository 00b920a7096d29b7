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

#include "cplkit/data_model.h"

#include <cmath>
#include <filesystem>
#include <limits>

#include "gtest/gtest.h"

namespace cplkit {
namespace {

TEST(AlphabetTest, RejectsEmptyAndDuplicateSymbols) {
  EXPECT_FALSE(Alphabet::Create({}).ok());
  EXPECT_FALSE(Alphabet::Create({"a", "b", "a"}).ok());
  auto a = Alphabet::Create({"x", "y"});
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a->size(), 2u);
  EXPECT_EQ(a->IndexOf("y"), 1u);
  EXPECT_FALSE(a->IndexOf("z").has_value());
}

TEST(ParseCsvTest, FirstAppearanceOrderAndQuotes) {
  auto d = ParseCsv("name,\"city, state\"\nbob,\"Reno, NV\"\nal,x\nbob,x\n");
  ASSERT_TRUE(d.ok()) << d.status();
  ASSERT_EQ(d->num_records(), 3u);
  EXPECT_EQ(d->attribute(1).name, "city, state");
  EXPECT_EQ(d->attribute(0).alphabet.symbols(),
            (std::vector<std::string>{"bob", "al"}));
  EXPECT_EQ(d->attribute(1).alphabet.symbol(0), "Reno, NV");
  EXPECT_EQ(d->cell(2, 0), 0u);
}

TEST(ParseCsvTest, RejectsRaggedAndEmptyInput) {
  EXPECT_FALSE(ParseCsv("a,b\n1,2\n3\n").ok());
  EXPECT_FALSE(ParseCsv("a,b\n").ok());
  EXPECT_FALSE(ParseCsv("").ok());
}

TEST(ParseCsvTest, BinsNumericColumnsFromHints) {
  std::map<std::string, ColumnHint> hints{
      {"age", ColumnHint{ColumnHint::Kind::kNumericBinned, 2}}};
  auto d = ParseCsv("age,c\n0,a\n10,a\n4,b\n6,b\n", hints);
  ASSERT_TRUE(d.ok()) << d.status();
  EXPECT_EQ(d->attribute(0).alphabet.size(), 2u);
  EXPECT_EQ(d->cell(0, 0), 0u);
  EXPECT_EQ(d->cell(1, 0), 1u);
  EXPECT_EQ(d->cell(2, 0), 0u);
  EXPECT_EQ(d->cell(3, 0), 1u);
  EXPECT_FALSE(ParseCsv("age\nold\n", hints).ok());
}

TEST(CsvTest, WriteThenLoadRoundTrips) {
  auto d = ParseCsv("a,b\n\"q,1\",x\nr,\"say \"\"hi\"\"\"\n");
  ASSERT_TRUE(d.ok()) << d.status();
  const std::string path =
      (std::filesystem::temp_directory_path() / "cplkit_roundtrip.csv")
          .string();
  ASSERT_TRUE(WriteCsv(*d, path).ok());
  auto back = LoadCsv(path);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, *d);
  std::filesystem::remove(path);
}

TEST(CsvTest, MissingFileIsNotFound) {
  EXPECT_EQ(LoadCsv("/nonexistent/file.csv").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(BinNumericTest, EqualWidthWithMaximumInLastBin) {
  std::vector<double> v{0, 2.5, 5, 7.5, 10};
  auto b = BinNumeric(v, 4);
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(b->indices, (std::vector<SymbolIndex>{0, 1, 2, 3, 3}));
  EXPECT_EQ(b->alphabet.size(), 4u);
}

TEST(BinNumericTest, AllEqualGivesSingleBinAndNonFiniteFails) {
  std::vector<double> same{3, 3, 3};
  auto b = BinNumeric(same, 5);
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(b->alphabet.size(), 1u);
  std::vector<double> bad{1, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_FALSE(BinNumeric(bad, 2).ok());
  EXPECT_FALSE(BinNumeric(same, 0).ok());
}

TEST(ExpandDatasetTest, TilesRecords) {
  auto d = ParseCsv("a\nx\ny\nz\n");
  ASSERT_TRUE(d.ok());
  auto e = ExpandDataset(*d, 4);
  ASSERT_TRUE(e.ok());
  ASSERT_EQ(e->num_records(), 12u);
  for (size_t i = 0; i < 12; ++i) EXPECT_EQ(e->cell(i, 0), d->cell(i % 3, 0));
  EXPECT_FALSE(ExpandDataset(*d, 0).ok());
}

TEST(JointDistributionTest, ValidatesAndComputesMarginals) {
  EXPECT_FALSE(JointDistribution::Create(1, 2, {0.5, 0.6}).ok());
  EXPECT_FALSE(JointDistribution::Create(1, 2, {-0.1, 1.1}).ok());
  auto j = JointDistribution::Create(2, 2, {0.1, 0.2, 0.3, 0.4});
  ASSERT_TRUE(j.ok());
  EXPECT_NEAR(j->RowMarginal()[0], 0.3, 1e-12);
  EXPECT_NEAR(j->ColMarginal()[1], 0.6, 1e-12);
  JointDistribution t = j->Transposed();
  EXPECT_DOUBLE_EQ(t.at(0, 1), 0.3);
  EXPECT_EQ(j->row_labels(), (std::vector<std::string>{"0", "1"}));
}

TEST(ConditionalTest, BothDirectionsFromJoint) {
  auto j = JointDistribution::Create(2, 2, {0.1, 0.3, 0.2, 0.4});
  ASSERT_TRUE(j.ok());
  ConditionalDistribution rows = ConditionalFromJoint(*j, ConditionOn::kRows);
  EXPECT_NEAR(rows.at(0, 0), 0.25, 1e-12);
  EXPECT_NEAR(rows.at(1, 1), 4.0 / 6.0, 1e-12);
  ConditionalDistribution cols =
      ConditionalFromJoint(*j, ConditionOn::kColumns);
  EXPECT_NEAR(cols.at(0, 0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(cols.at(1, 1), 4.0 / 7.0, 1e-12);
}

TEST(ConditionalTest, ZeroMassRowsAreAbsent) {
  auto j = JointDistribution::Create(3, 2, {0.5, 0, 0, 0, 0.25, 0.25});
  ASSERT_TRUE(j.ok());
  ConditionalDistribution c = ConditionalFromJoint(*j, ConditionOn::kRows);
  EXPECT_TRUE(c.present(0));
  EXPECT_FALSE(c.present(1));
  EXPECT_EQ(c.num_present(), 2u);

  auto direct = ConditionalDistribution::Create(2, 2, {0.5, 0.5, 0, 0});
  ASSERT_TRUE(direct.ok());
  EXPECT_FALSE(direct->present(1));
  EXPECT_FALSE(ConditionalDistribution::Create(1, 2, {0.5, 0.4}).ok());
}

TEST(ConditionalTest, PermuteColumnsMovesEntries) {
  auto c = ConditionalDistribution::Create(1, 3, {0.2, 0.3, 0.5});
  ASSERT_TRUE(c.ok());
  std::vector<size_t> perm{2, 0, 1};
  ConditionalDistribution p = c->PermuteColumns(perm);
  EXPECT_DOUBLE_EQ(p.at(0, 2), 0.2);
  EXPECT_DOUBLE_EQ(p.at(0, 0), 0.3);
  EXPECT_DOUBLE_EQ(p.at(0, 1), 0.5);
}

TEST(EmpiricalJointTest, CountsPairs) {
  auto d = ParseCsv("a,b\nx,u\nx,v\ny,v\ny,v\n");
  ASSERT_TRUE(d.ok());
  auto j = EmpiricalJoint(*d, 0, 1);
  ASSERT_TRUE(j.ok());
  EXPECT_DOUBLE_EQ(j->at(0, 0), 0.25);
  EXPECT_DOUBLE_EQ(j->at(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(j->at(1, 0), 0.0);
  EXPECT_FALSE(EmpiricalJoint(*d, 0, 0).ok());
  EXPECT_FALSE(EmpiricalJoint(*d, 0, 5).ok());
}

}  // namespace
}  // namespace cplkit

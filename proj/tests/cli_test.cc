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

#include "cplkit/cli.h"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cplkit/fixtures.h"
#include "cplkit/serialization.h"
#include "gtest/gtest.h"

namespace cplkit {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

CliRun Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string StripWallTime(const std::string& payload) {
  Json j = Json::parse(payload);
  j["manifest"].erase("wall_time_seconds");
  return j.dump();
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(fs::temp_directory_path() /
                        ("cplkit_cli_test_" + std::to_string(::getpid())));
    fs::create_directories(*dir_);
    ASSERT_TRUE(WriteCsv(*AsymmetricPairFixture(), Path("pair.csv")).ok());
    ASSERT_TRUE(WriteCsv(*MixedCorrelationFixture(kDefaultFixtureSeed, 5000),
                         Path("mixed.csv"))
                    .ok());
    ASSERT_TRUE(WriteCsv(*WeakCorrelationFixture(kDefaultFixtureSeed, 20000, 4),
                         Path("weak.csv"))
                    .ok());
    std::ofstream(Path("joint.json"))
        << JointToJson(*AsymmetricPairJoint()).dump();
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }
  static std::string Path(const std::string& name) {
    return (*dir_ / name).string();
  }

  static fs::path* dir_;
};

fs::path* CliTest::dir_ = nullptr;

TEST_F(CliTest, AnalyzeBoundOnJoint) {
  CliRun r = Invoke({"analyze", "bound", "--cond", Path("joint.json"),
                     "--direction", "columns", "--epsilon", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json j = r.json();
  EXPECT_EQ(j["manifest"]["command"], "analyze bound");
  EXPECT_NEAR(j["result"]["leakage_nats"].get<double>(), 0.6203, 1e-3);
  EXPECT_EQ(j["result"]["limit_infinite"], true);
  CliRun rows = Invoke({"analyze", "bound", "--cond", Path("joint.json"),
                        "--direction", "rows", "--epsilon", "2"});
  EXPECT_NEAR(rows.json()["result"]["leakage_nats"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(rows.json()["result"]["max_attainable"], true);
}

TEST_F(CliTest, AnalyzeExact) {
  CliRun r = Invoke({"analyze", "exact", "--cond", Path("joint.json"),
                     "--mechanism", "grr", "--epsilon", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(r.json()["result"]["leakage_nats"].get<double>(), 1.0, 1e-12);
  CliRun bits =
      Invoke({"analyze", "exact", "--cond", Path("joint.json"), "--mechanism",
              "grr", "--epsilon", "1", "--units", "bits"});
  EXPECT_EQ(bits.json()["schema"]["units"]["leakage"], "bits");
}

TEST_F(CliTest, AnalyzeMatrix) {
  CliRun r = Invoke({"analyze", "matrix", "--data", Path("pair.csv"),
                     "--epsilon", "1", "--out", Path("matrix.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json m = r.json()["result"]["matrix"]["leakage"];
  EXPECT_TRUE(m[0][0].is_null());
  EXPECT_NEAR(m[0][1].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(m[1][0].get<double>(), 0.6203, 0.02);
  std::ifstream saved(Path("matrix.json"));
  std::stringstream buffer;
  buffer << saved.rdbuf();
  EXPECT_EQ(buffer.str(), r.out);

  CliRun zero = Invoke(
      {"analyze", "matrix", "--data", Path("pair.csv"), "--epsilon", "0"});
  EXPECT_EQ(zero.json()["result"]["tcpl"], 0.0);
}

TEST_F(CliTest, Estimate) {
  CliRun r = Invoke({"--seed", "3", "estimate", "--data", Path("pair.csv"),
                     "--mechanism", "grr", "--epsilon", "1", "--target",
                     "primary", "--r", "2", "--surrogates", "19", "--tpl"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json res = r.json()["result"];
  EXPECT_EQ(res["rows_perturbed"], 200000);
  EXPECT_NEAR(res["cpl"]["leakage"].get<double>(), 1.0, 0.05);
  EXPECT_NEAR(res["cpl"]["p_value"].get<double>(), 0.05, 1e-12);
  EXPECT_TRUE(res.contains("tpl"));
}

TEST_F(CliTest, Benchmarks) {
  CliRun a = Invoke({"benchmark", "analyzers", "--data", Path("mixed.csv"),
                     "--epsilons", "0.5,1", "--thresholds", "0.2,0.4"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.json()["result"]["points"].size(), 12u);
  CliRun u = Invoke({"benchmark", "utility", "--data", Path("weak.csv"),
                     "--epsilons", "1", "--mechanisms", "grr,oue,ss",
                     "--cpl-source", "statistical", "--r", "2"});
  ASSERT_EQ(u.code, kExitOk) << u.err;
  EXPECT_EQ(u.json()["result"]["points"].size(), 3u);
}

TEST_F(CliTest, Calibrate) {
  CliRun r = Invoke({"calibrate", "--data", Path("weak.csv"), "--budget", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json res = r.json()["result"];
  EXPECT_EQ(res["spl_epsilon"], 1.0);
  EXPECT_GT(res["epsilon_star"].get<double>(), 1.0);
  EXPECT_EQ(res["infeasible"], false);
}

TEST_F(CliTest, FixturesSubcommand) {
  CliRun r = Invoke({"--seed", "9", "fixtures", "--out", Path("fx")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json files = r.json()["result"]["files"];
  EXPECT_EQ(files.size(), 7u);
  for (const Json& f : files) {
    EXPECT_TRUE(fs::exists(f["path"].get<std::string>()));
  }
  CliRun again = Invoke({"--seed", "9", "fixtures", "--out", Path("fx")});
  EXPECT_EQ(again.json()["result"], r.json()["result"]);
}

TEST_F(CliTest, InputErrorsExitWithTwo) {
  CliRun missing = Invoke({"analyze", "matrix", "--data", Path("nothere.csv")});
  EXPECT_EQ(missing.code, kExitInputError);
  EXPECT_EQ(Json::parse(missing.err)["error"]["code"], "NOT_FOUND");
  EXPECT_TRUE(missing.out.empty());
  EXPECT_EQ(Invoke({"analyze", "bound"}).code, kExitInputError);
  EXPECT_EQ(Invoke({"analyze", "exact", "--cond", Path("joint.json"),
                    "--mechanism", "oue"})
                .code,
            kExitInputError);
  EXPECT_EQ(
      Invoke({"estimate", "--data", Path("pair.csv"), "--target", "nobody"})
          .code,
      kExitInputError);
  EXPECT_EQ(Invoke({"analyze", "bound", "--cond", Path("joint.json"),
                    "--epsilon", "-1"})
                .code,
            kExitInputError);
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, DeterministicModuloWallTime) {
  const std::vector<std::vector<std::string>> commands{
      {"--seed", "4", "estimate", "--data", Path("pair.csv"), "--epsilon", "1",
       "--target", "0", "--r", "2", "--surrogates", "9"},
      {"--seed", "4", "benchmark", "utility", "--data", Path("weak.csv"),
       "--epsilons", "1", "--mechanisms", "olh", "--r", "2"},
  };
  for (const auto& args : commands) {
    CliRun a = Invoke(args);
    CliRun b = Invoke(args);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(StripWallTime(a.out), StripWallTime(b.out));
  }
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  ::setenv("CPL_KIT_SEED", "77", 1);
  CliRun env = Invoke(
      {"analyze", "exact", "--cond", Path("joint.json"), "--epsilon", "1"});
  CliRun flag = Invoke({"--seed", "5", "analyze", "exact", "--cond",
                        Path("joint.json"), "--epsilon", "1"});
  ::unsetenv("CPL_KIT_SEED");
  CliRun none = Invoke(
      {"analyze", "exact", "--cond", Path("joint.json"), "--epsilon", "1"});
  EXPECT_EQ(env.json()["manifest"]["seed"], 77);
  EXPECT_EQ(flag.json()["manifest"]["seed"], 5);
  EXPECT_EQ(none.json()["manifest"]["seed"], 0);
  EXPECT_NE(env.json()["manifest"]["config_digest"],
            none.json()["manifest"]["config_digest"]);
}

TEST(SerializationTest, MechanismSpecRoundTrip) {
  for (MechanismKind kind :
       {MechanismKind::kGrr, MechanismKind::kRappor, MechanismKind::kOue,
        MechanismKind::kBlh, MechanismKind::kOlh, MechanismKind::kShe,
        MechanismKind::kSs, MechanismKind::kExp}) {
    auto spec = MechanismSpec::Create(kind, 1.5, 5);
    ASSERT_TRUE(spec.ok());
    auto back = MechanismSpecFromJson(ToJson(*spec));
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(ToJson(*back), ToJson(*spec));
  }
}

TEST(SerializationTest, ConditionalRoundTripAndUnits) {
  ConditionalDistribution c =
      ConditionalFromJoint(*AsymmetricPairJoint(), ConditionOn::kColumns);
  auto back = ConditionalFromJson(ConditionalToJson(c), ConditionOn::kRows);
  ASSERT_TRUE(back.ok());
  for (size_t i = 0; i < c.num_rows(); ++i) {
    for (size_t j = 0; j < c.num_cols(); ++j) {
      EXPECT_DOUBLE_EQ(back->at(i, j), c.at(i, j));
    }
  }
  EXPECT_NEAR(ConvertLeakage(std::log(2.0), LeakageUnit::kBits), 1.0, 1e-12);
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

}  // namespace
}  // namespace cplkit

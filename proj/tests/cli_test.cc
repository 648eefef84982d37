// Copyright 2026 The PIR-CSI Authors
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

#include "../tools/cli.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "pircsi/net.h"

namespace pircsi::cli {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "pircsi");
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string TempPath(const std::string& name) { return ::testing::TempDir() + "/" + name; }

TEST(DemoTest, ModelOneIsDeterministicAndPasses) {
  const std::vector<std::string> args = {"demo", "--model", "I", "--k", "5", "--m", "1",
                                         "--q",  "3",       "--seed", "7"};
  const Result a = RunCli(args);
  const Result b = RunCli(args);
  EXPECT_EQ(a.code, kExitPass) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_THAT(a.out, HasSubstr("PASS"));
  EXPECT_THAT(a.out, ::testing::Not(HasSubstr("Q_1")));
}

TEST(DemoTest, ModelTwoJson) {
  const Result r = RunCli({"demo", "--model", "II", "--k", "4", "--m", "2", "--format", "json"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["answer"].size(), 1u);
  EXPECT_EQ(j["case"], "case1");
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(DemoTest, SideInformationOnly) {
  const Result r = RunCli({"demo", "--model", "II", "--k", "3", "--m", "1"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_THAT(r.out, HasSubstr("no query sent"));
}

TEST(DemoTest, RevealAnnotatesSets) {
  const Result plain = RunCli({"demo", "--model", "II", "--k", "8", "--m", "3", "--seed", "5"});
  const Result shown =
      RunCli({"demo", "--model", "II", "--k", "8", "--m", "3", "--seed", "5", "--reveal"});
  EXPECT_EQ(shown.code, kExitPass);
  EXPECT_NE(plain.out, shown.out);
}

TEST(DemoTest, UsageErrors) {
  EXPECT_EQ(RunCli({"demo", "--model", "I", "--k", "8", "--m", "9"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"demo", "--model", "III"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"demo", "--q", "4"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"demo", "--model", "II", "--k", "4", "--m", "0"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"nonsense"}).code, kExitUsage);
  EXPECT_EQ(RunCli({}).code, kExitUsage);
}

TEST(AuditTest, ExactUniform) {
  const Result r = RunCli({"audit", "--exact", "--model", "II", "--k", "4", "--m", "2"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["uniform"].get<bool>());
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["fingerprints"].size(), 4u);
  for (const auto& row : j["fingerprints"]) {
    for (const auto& p : row["posterior"]) {
      EXPECT_EQ(p["num"], "1");
      EXPECT_EQ(p["den"], "4");
    }
  }
  EXPECT_TRUE(j["rate"]["equal"].get<bool>());
}

TEST(AuditTest, RangeErrorExitsTwo) {
  const Result r = RunCli({"audit", "--exact", "--model", "I", "--k", "8", "--m", "9"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_THAT(r.err, HasSubstr("M"));
  EXPECT_EQ(RunCli({"audit", "--model", "I", "--k", "4", "--m", "1"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"audit", "--exact", "--mc", "--k", "4", "--m", "1"}).code, kExitUsage);
}

TEST(AuditTest, ExactGuardGivesGuidance) {
  const Result r = RunCli({"audit", "--exact", "--model", "I", "--k", "12", "--m", "2",
                           "--max-branches", "100"});
  EXPECT_NE(r.code, kExitPass);
  EXPECT_THAT(r.err, HasSubstr("--mc"));
}

TEST(AuditTest, ExactMutationFails) {
  const Result r = RunCli({"audit", "--exact", "--model", "I", "--k", "8", "--m", "2",
                           "--mutation", "skewed-pmf"});
  EXPECT_EQ(r.code, kExitCheckFailed);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j["passed"].get<bool>());
  EXPECT_EQ(j["mutation"], "skewed-pmf");
}

TEST(AuditTest, MonteCarloWritesOutputFile) {
  const std::string path = TempPath("mc.json");
  const Result r = RunCli({"audit", "--mc", "--model", "I", "--k", "8", "--m", "2", "--trials",
                           "20000", "--seed", "3", "--output", path});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  std::ifstream in(path);
  const nlohmann::json j = nlohmann::json::parse(in);
  EXPECT_GT(j["min_p_value"].get<double>(), j["threshold"].get<double>());
  EXPECT_EQ(j["trials"], 20000);
  EXPECT_EQ(RunCli({"audit", "--mc", "--model", "I", "--k", "8", "--m", "2", "--trials", "100"})
                .code,
            kExitUsage);
}

TEST(AuditTest, MonteCarloCatchesUnshuffled) {
  const Result r = RunCli({"audit", "--mc", "--model", "I", "--k", "8", "--m", "2", "--trials",
                           "20000", "--mutation", "unshuffled"});
  EXPECT_EQ(r.code, kExitCheckFailed);
}

TEST(SweepTest, ModelOneAllEqual) {
  const Result r = RunCli({"sweep", "--model", "I", "--k-min", "2", "--k-max", "12"});
  ASSERT_EQ(r.code, kExitPass);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "model,K,M,elements_downloaded,measured_rate,capacity,equal");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_THAT(line, ::testing::EndsWith(",true"));
  }
  EXPECT_EQ(rows, 77);  // sum of K over 2..12
}

TEST(SweepTest, ModelTwoRates) {
  const Result r = RunCli({"sweep", "--model", "II", "--k-min", "12", "--k-max", "12"});
  ASSERT_EQ(r.code, kExitPass);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  std::vector<std::string> rates;
  while (std::getline(lines, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 7u);
    rates.push_back(cols[4]);
  }
  std::vector<std::string> expected = {"inf", "1"};
  for (int M = 3; M <= 11; ++M) expected.push_back("1/2");
  expected.push_back("1");
  EXPECT_EQ(rates, expected);
}

TEST(SweepTest, EmptyRangeIsHeaderOnly) {
  const Result r = RunCli({"sweep", "--k-min", "9", "--k-max", "3"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_EQ(r.out, "model,K,M,elements_downloaded,measured_rate,capacity,equal\n");
}

TEST(PmfDumpTest, Kinds) {
  Result r = RunCli({"pmf", "dump", "--kind", "case2", "--k", "8", "--m", "3"});
  ASSERT_EQ(r.code, kExitPass);
  nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["sum"]["num"], "1");
  EXPECT_EQ(j["sum"]["den"], "1");
  r = RunCli({"pmf", "dump", "--kind", "rp", "--k", "5", "--m", "1"});
  ASSERT_EQ(r.code, kExitPass);
  j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["distribution"]["n"], 3);
  EXPECT_EQ(j["distribution"]["l"], 1);
  r = RunCli({"pmf", "dump", "--kind", "case3", "--k", "8", "--m", "6"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_EQ(RunCli({"pmf", "dump", "--kind", "case3", "--k", "8", "--m", "3"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"pmf", "dump", "--kind", "other"}).code, kExitUsage);
}

TEST(DbGenTest, WritesLoadableDatabase) {
  const std::string path = TempPath("gen.db");
  const Result r = RunCli({"db", "gen", "--k", "6", "--q", "7", "--degree", "2", "--seed", "9",
                           "--out", path});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const Database db = *Database::Load(path);
  EXPECT_EQ(db.size(), 6u);
  EXPECT_EQ(db.params()->q(), 7u);
  EXPECT_EQ(db.params()->m(), 2u);
  const std::string again = TempPath("gen2.db");
  RunCli({"db", "gen", "--k", "6", "--q", "7", "--degree", "2", "--seed", "9", "--out", again});
  std::ifstream a(path, std::ios::binary), b(again, std::ios::binary);
  EXPECT_EQ(std::string(std::istreambuf_iterator<char>(a), {}),
            std::string(std::istreambuf_iterator<char>(b), {}));
  EXPECT_EQ(RunCli({"db", "gen", "--k", "6"}).code, kExitUsage);
}

TEST(FetchTest, AgainstInProcessServer) {
  const std::string path = TempPath("fetch.db");
  ASSERT_EQ(RunCli({"db", "gen", "--k", "7", "--q", "5", "--degree", "2", "--out", path}).code,
            kExitPass);
  auto db = std::make_shared<Database>(*Database::Load(path));
  auto server = *Server::Start(db, 0);
  const std::string port = std::to_string(server->port());
  for (const char* model : {"I", "II"}) {
    for (const char* m : {"1", "3", "6"}) {
      const Result r =
          RunCli({"fetch", "--model", model, "--m", m, "--port", port, "--db", path});
      EXPECT_EQ(r.code, kExitPass) << r.err;
      EXPECT_THAT(r.out, HasSubstr("PASS"));
    }
  }
  ::setenv(kPortEnv, port.c_str(), 1);
  const Result env = RunCli({"fetch", "--model", "II", "--m", "4", "--db", path});
  ::unsetenv(kPortEnv);
  EXPECT_EQ(env.code, kExitPass) << env.err;

  const std::string other = TempPath("other.db");
  RunCli({"db", "gen", "--k", "5", "--q", "5", "--degree", "2", "--out", other});
  const Result mismatch = RunCli({"fetch", "--m", "1", "--port", port, "--db", other});
  EXPECT_EQ(mismatch.code, kExitCheckFailed);
  EXPECT_THAT(mismatch.err, HasSubstr("local copy differs"));
  EXPECT_EQ(RunCli({"fetch", "--m", "1"}).code, kExitUsage);
}

}  // namespace
}  // namespace pircsi::cli

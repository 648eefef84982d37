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

#include "pircsi/model.h"

#include <cstdio>
#include <filesystem>
#include <map>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "pircsi/audit.h"
#include "pircsi/rational.h"

namespace pircsi {
namespace {

FieldParamsPtr Field(uint32_t q, uint32_t m) { return *FieldParams::Create(q, m); }

Database SmallDb() {
  auto f = Field(3, 1);
  return *Database::Create(f, {FieldElement::FromBase(f, 1), FieldElement::FromBase(f, 2),
                               FieldElement::FromBase(f, 0)});
}

TEST(DatabaseTest, CreateRejectsForeignElementsAndEmpty) {
  auto f3 = Field(3, 1);
  auto f5 = Field(5, 1);
  EXPECT_FALSE(Database::Create(f3, {}).ok());
  EXPECT_FALSE(Database::Create(f3, {FieldElement::One(f5)}).ok());
}

TEST(DatabaseTest, SerializeRoundTripAndHeader) {
  Rng rng(1);
  const Database db = Database::Random(Field(7, 2), 6, rng);
  const std::vector<uint8_t> bytes = db.Serialize();
  ASSERT_EQ(bytes.size(), 12u + 6 * 2 * 2);
  EXPECT_THAT(std::vector<uint8_t>(bytes.begin(), bytes.begin() + 12),
              ::testing::ElementsAre(7, 0, 0, 0, 2, 0, 0, 0, 6, 0, 0, 0));
  auto back = Database::Parse(bytes);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->messages(), db.messages());
}

TEST(DatabaseTest, ParseRejectsTruncatedAndTrailing) {
  Rng rng(1);
  std::vector<uint8_t> bytes = Database::Random(Field(3, 1), 4, rng).Serialize();
  EXPECT_FALSE(Database::Parse(std::span(bytes).first(bytes.size() - 1)).ok());
  bytes.push_back(0);
  EXPECT_FALSE(Database::Parse(bytes).ok());
  EXPECT_FALSE(Database::Parse({}).ok());
}

TEST(DatabaseTest, SaveLoad) {
  Rng rng(2);
  const Database db = Database::Random(Field(5, 1), 9, rng);
  const std::string path =
      (std::filesystem::temp_directory_path() / "pircsi_model_test.db").string();
  ASSERT_TRUE(db.Save(path).ok());
  auto loaded = Database::Load(path);
  std::remove(path.c_str());
  ASSERT_TRUE(loaded.ok()) << loaded.status();
  EXPECT_EQ(loaded->messages(), db.messages());
  EXPECT_FALSE(Database::Load("/nonexistent/pircsi.db").ok());
}

TEST(SideInformationTest, Examples) {
  const Database db = SmallDb();
  auto f = db.params();
  EXPECT_EQ(*SideInformation(db, {}, {}), FieldElement::Zero(f));
  const std::vector<MessageIndex> s = {1, 2};
  const std::vector<FieldElement> c = {FieldElement::FromBase(f, 2), FieldElement::FromBase(f, 2)};
  EXPECT_EQ(*SideInformation(db, s, c), FieldElement::Zero(f));
  const std::vector<MessageIndex> one = {2};
  const std::vector<FieldElement> unit = {FieldElement::One(f)};
  EXPECT_EQ(*SideInformation(db, one, unit), db.message(2));
}

TEST(SideInformationTest, Errors) {
  const Database db = SmallDb();
  auto f = db.params();
  const std::vector<FieldElement> unit = {FieldElement::One(f)};
  const std::vector<MessageIndex> bad = {4};
  EXPECT_FALSE(SideInformation(db, bad, unit).ok());
  const std::vector<MessageIndex> zero_index = {0};
  EXPECT_FALSE(SideInformation(db, zero_index, unit).ok());
  const std::vector<MessageIndex> ok = {1};
  const std::vector<FieldElement> zero = {FieldElement::Zero(f)};
  EXPECT_FALSE(SideInformation(db, ok, zero).ok());
  const std::vector<MessageIndex> dup = {1, 1};
  const std::vector<FieldElement> two = {FieldElement::One(f), FieldElement::One(f)};
  EXPECT_FALSE(SideInformation(db, dup, two).ok());
  EXPECT_FALSE(SideInformation(db, ok, two).ok());
}

TEST(IndicatorTest, Examples) {
  const std::vector<MessageIndex> s = {1, 2};
  EXPECT_EQ(Indicator(2, s), 1);
  EXPECT_EQ(Indicator(3, s), 0);
  EXPECT_EQ(Indicator(1, {}), 0);
}

TEST(SampleScenarioTest, EmptySideInformation) {
  const Database db = SmallDb();
  Rng rng(3);
  std::map<MessageIndex, int> demands;
  for (int i = 0; i < 3000; ++i) {
    auto sc = SampleScenario(db, 0, Model::kI, rng);
    ASSERT_TRUE(sc.ok());
    EXPECT_TRUE(sc->support.empty());
    EXPECT_TRUE(sc->coeffs.empty());
    EXPECT_TRUE(sc->side_info.IsZero());
    ++demands[sc->demand];
  }
  EXPECT_EQ(demands.size(), 3u);
}

TEST(SampleScenarioTest, FullSupportModelTwo) {
  const Database db = SmallDb();
  Rng rng(4);
  std::map<MessageIndex, int> demands;
  for (int i = 0; i < 3000; ++i) {
    auto sc = SampleScenario(db, 3, Model::kII, rng);
    ASSERT_TRUE(sc.ok());
    EXPECT_EQ(sc->support, (std::vector<MessageIndex>{1, 2, 3}));
    ++demands[sc->demand];
  }
  EXPECT_EQ(demands.size(), 3u);
}

TEST(SampleScenarioTest, RangeErrors) {
  const Database db = SmallDb();
  Rng rng(5);
  EXPECT_FALSE(SampleScenario(db, 3, Model::kI, rng).ok());
  EXPECT_FALSE(SampleScenario(db, -1, Model::kI, rng).ok());
  EXPECT_FALSE(SampleScenario(db, 0, Model::kII, rng).ok());
  EXPECT_FALSE(SampleScenario(db, 4, Model::kII, rng).ok());
}

TEST(SampleScenarioTest, InvariantsHoldOnEverySample) {
  Rng rng(6);
  for (auto [q, m] : {std::pair{3u, 1u}, std::pair{5u, 2u}, std::pair{7u, 1u}}) {
    const Database db = Database::Random(Field(q, m), 7, rng);
    for (Model model : {Model::kI, Model::kII}) {
      for (int M = model == Model::kI ? 0 : 1; M <= (model == Model::kI ? 6 : 7); ++M) {
        for (int t = 0; t < 50; ++t) {
          auto sc = SampleScenario(db, M, model, rng);
          ASSERT_TRUE(sc.ok());
          ASSERT_EQ(sc->support.size(), static_cast<size_t>(M));
          ASSERT_EQ(sc->coeffs.size(), static_cast<size_t>(M));
          for (const FieldElement& c : sc->coeffs) {
            EXPECT_TRUE(c.IsBase());
            EXPECT_FALSE(c.IsZero());
          }
          EXPECT_TRUE(std::is_sorted(sc->support.begin(), sc->support.end()));
          EXPECT_EQ(Indicator(sc->demand, sc->support), model == Model::kII ? 1 : 0);
          EXPECT_EQ(*SideInformation(db, sc->support, sc->coeffs), sc->side_info);
        }
      }
    }
  }
}

TEST(SampleScenarioTest, ModelOneDemandMarginalIsUniform) {
  Rng rng(7);
  const Database db = Database::Random(Field(3, 1), 4, rng);
  const int n = 100000;
  std::vector<int> counts(5, 0);
  for (int i = 0; i < n; ++i) ++counts[SampleScenario(db, 2, Model::kI, rng)->demand];
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (int w = 1; w <= 4; ++w) EXPECT_NEAR(counts[w], n / 4.0, 4 * sigma) << w;
}

TEST(SampleScenarioTest, SupportIsUniformOverSubsets) {
  Rng rng(8);
  for (int K = 2; K <= 6; ++K) {
    const Database db = Database::Random(Field(3, 1), static_cast<uint32_t>(K), rng);
    for (int M = 1; M < K; ++M) {
      std::map<std::vector<MessageIndex>, long long> counts;
      const int n = 20000;
      for (int i = 0; i < n; ++i) ++counts[SampleScenario(db, M, Model::kI, rng)->support];
      const long subsets = Binomial(K, M).get_si();
      ASSERT_EQ(static_cast<long>(counts.size()), subsets);
      const double expected = static_cast<double>(n) / subsets;
      double x2 = 0;
      for (const auto& [s, c] : counts) x2 += (c - expected) * (c - expected) / expected;
      EXPECT_GE(ChiSquareSurvival(x2, subsets - 1), 0.01) << "K=" << K << " M=" << M;
    }
  }
}

}  // namespace
}  // namespace pircsi

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

#include "pircsi/audit.h"

#include <cmath>
#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "pircsi/protocol_rp.h"
#include "pircsi/rng.h"

namespace pircsi {
namespace {

using ::testing::ElementsAre;

FieldParamsPtr Field(uint32_t q, uint32_t m) { return *FieldParams::Create(q, m); }

void ExpectUniform(const PosteriorReport& report) {
  const Rational uniform = MakeRational(1, report.num_messages);
  EXPECT_TRUE(report.uniform);
  EXPECT_EQ(report.worst_deviation, 0);
  for (const PosteriorRow& row : report.rows) {
    for (const Rational& p : row.posterior) EXPECT_EQ(p, uniform);
  }
}

TEST(AuditExactTest, ModelTwoCaseOne) {
  const PosteriorReport report = *AuditExact(Model::kII, 4, 2);
  // Case 1 sends one singleton, so the fingerprints are {1}..{4}.
  ASSERT_EQ(report.rows.size(), 4u);
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(report.rows[i].fingerprint,
              Fingerprint{{static_cast<MessageIndex>(i + 1)}});
  }
  ExpectUniform(report);
}

TEST(AuditExactTest, ModelTwoCaseFourIsConstant) {
  const PosteriorReport report = *AuditExact(Model::kII, 3, 3);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_EQ(report.rows[0].fingerprint, (Fingerprint{{1, 2, 3}}));
  for (const Rational& l : report.rows[0].likelihood) EXPECT_EQ(l, 1);
  ExpectUniform(report);
}

TEST(AuditExactTest, ModelOnePairings) {
  const PosteriorReport report = *AuditExact(Model::kI, 4, 1);
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.rows[0].fingerprint, (Fingerprint{{1, 2}, {3, 4}}));
  EXPECT_EQ(report.rows[1].fingerprint, (Fingerprint{{1, 3}, {2, 4}}));
  EXPECT_EQ(report.rows[2].fingerprint, (Fingerprint{{1, 4}, {2, 3}}));
  for (const PosteriorRow& row : report.rows) {
    for (const Rational& l : row.likelihood) EXPECT_EQ(l, MakeRational(1, 3));
  }
  ExpectUniform(report);
}

TEST(AuditExactTest, ModelOneThreeSets) {
  // K=5, M=1: three pairs over five indices with one index repeated. There are
  // 5 * C(4,2) = 30 such structures and each is equally likely given any W.
  const PosteriorReport report = *AuditExact(Model::kI, 5, 1);
  std::set<Fingerprint> distinct;
  for (const PosteriorRow& row : report.rows) {
    distinct.insert(row.fingerprint);
    for (const auto& s : row.fingerprint) ASSERT_EQ(s.size(), 2u);
  }
  EXPECT_EQ(distinct.size(), report.rows.size());
  EXPECT_EQ(report.rows.size(), 30u);
  for (const PosteriorRow& row : report.rows) {
    for (const Rational& l : row.likelihood) {
      EXPECT_EQ(l, MakeRational(1, 30));
    }
  }
  ExpectUniform(report);
}

TEST(AuditExactTest, RowsSumToOneAndLikelihoodsNormalise) {
  for (Model model : {Model::kI, Model::kII}) {
    for (int K = 2; K <= 6; ++K) {
      const int lo = model == Model::kI ? 0 : 1;
      const int hi = model == Model::kI ? K - 1 : K;
      for (int M = lo; M <= hi; ++M) {
        const PosteriorReport report = *AuditExact(model, K, M);
        EXPECT_EQ(BigInt(static_cast<long>(report.branches)), *EstimateExactBranches(model, K, M));
        std::vector<Rational> mass(K, 0);
        for (const PosteriorRow& row : report.rows) {
          Rational sum = 0;
          for (const Rational& p : row.posterior) sum += p;
          EXPECT_EQ(sum, 1) << ModelName(model) << " K=" << K << " M=" << M;
          for (int w = 0; w < K; ++w) mass[w] += row.likelihood[w];
        }
        for (int w = 0; w < K; ++w) EXPECT_EQ(mass[w], 1) << "K=" << K << " M=" << M;
      }
    }
  }
}

TEST(AuditExactTest, GuardRefusesLargeInstances) {
  const auto result = AuditExact(Model::kI, 12, 2, {.max_branches = 1000});
  ASSERT_FALSE(result.ok());
  EXPECT_EQ(result.status().code(), absl::StatusCode::kResourceExhausted);
  EXPECT_THAT(std::string(result.status().message()), ::testing::HasSubstr("Monte-Carlo"));
  EXPECT_FALSE(AuditExact(Model::kI, 4, 4).ok());
  EXPECT_FALSE(AuditExact(Model::kII, 4, 0).ok());
}

TEST(AuditExactTest, SkewedPmfIsFlagged) {
  const PosteriorReport report =
      *AuditExact(Model::kI, 8, 2, {.mutation = RpMutation::kSkewedPmf});
  EXPECT_FALSE(report.uniform);
  EXPECT_GT(report.worst_deviation, 0);
}

TEST(AuditExactTest, DeterministicExtrasIsFlagged) {
  const PosteriorReport report =
      *AuditExact(Model::kI, 5, 1, {.mutation = RpMutation::kDeterministicExtras});
  EXPECT_FALSE(report.uniform);
}

TEST(BranchEnumeratorTest, WeightsSumToOne) {
  const DiscretePmf pmf({MakeRational(1, 3), 0, MakeRational(2, 3)});
  const std::vector<MessageIndex> pool = {1, 2, 3, 4, 5};
  BranchEnumerator e;
  Rational total = 0;
  std::set<std::pair<size_t, std::vector<MessageIndex>>> seen;
  long branches = 0;
  do {
    const size_t c = e.Choose(pmf);
    EXPECT_NE(c, 1u);
    const std::vector<MessageIndex> sub = e.Subset(pool, c == 0 ? 1 : 2);
    seen.insert({c, sub});
    total += e.weight();
    ++branches;
  } while (e.Advance());
  EXPECT_EQ(total, 1);
  EXPECT_EQ(branches, 5 + 10);
  EXPECT_EQ(seen.size(), 15u);
}

TEST(BranchEnumeratorTest, PartitionsAreEnumeratedOnce) {
  const std::vector<MessageIndex> pool = {1, 2, 3, 4, 5, 6};
  BranchEnumerator e;
  Rational total = 0;
  std::set<std::vector<std::vector<MessageIndex>>> seen;
  do {
    auto blocks = e.Partition(pool, 2);
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    seen.insert(blocks);
    total += e.weight();
  } while (e.Advance());
  // 6! / (2!^3 3!) = 15 perfect matchings.
  EXPECT_EQ(seen.size(), 15u);
  EXPECT_EQ(total, 1);
}

TEST(BranchEnumeratorTest, PinnedDraws) {
  BranchEnumerator e;
  auto f = Field(5, 1);
  EXPECT_THAT(e.Permutation(3), ElementsAre(0, 1, 2));
  EXPECT_EQ(e.Coefficient(f, std::nullopt), FieldElement::One(f));
  EXPECT_EQ(e.Coefficient(f, 1u), FieldElement::FromBase(f, 2));
  EXPECT_FALSE(e.Advance());
}

TEST(UnrankCombinationTest, LexicographicOrder) {
  const std::vector<MessageIndex> pool = {2, 4, 6, 8, 9};
  std::vector<std::vector<MessageIndex>> all;
  for (uint64_t r = 0; r < 10; ++r) all.push_back(UnrankCombination(pool, 3, r));
  EXPECT_THAT(all.front(), ElementsAre(2, 4, 6));
  EXPECT_THAT(all[1], ElementsAre(2, 4, 8));
  EXPECT_THAT(all.back(), ElementsAre(6, 8, 9));
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  EXPECT_EQ(std::set<std::vector<MessageIndex>>(all.begin(), all.end()).size(), 10u);
}

TEST(EstimateExactBranchesTest, MatchesWalk) {
  for (auto [K, M] : {std::pair{6, 1}, {6, 2}, {7, 2}, {8, 3}}) {
    const PosteriorReport report = *AuditExact(Model::kI, K, M);
    EXPECT_EQ(BigInt(static_cast<long>(report.branches)), *EstimateExactBranches(Model::kI, K, M));
  }
}

TEST(ChiSquareSurvivalTest, KnownValues) {
  // Two degrees of freedom: survival is exp(-x/2).
  for (double x : {0.5, 2.0, 9.0}) EXPECT_NEAR(ChiSquareSurvival(x, 2), std::exp(-x / 2), 1e-12);
  EXPECT_NEAR(ChiSquareSurvival(3.841458820694124, 1), 0.05, 1e-9);
  EXPECT_EQ(ChiSquareSurvival(0, 3), 1.0);
}

TEST(AuditMonteCarloTest, RejectsTooFewTrials) {
  Rng rng(1);
  EXPECT_FALSE(AuditMonteCarlo(Model::kI, 8, 2, kMinMonteCarloTrials - 1, rng).ok());
}

TEST(AuditMonteCarloTest, PassesAndCatchesUnshuffledSets) {
  Rng rng(2024);
  const MonteCarloReport good = *AuditMonteCarlo(Model::kI, 8, 2, 50000, rng);
  EXPECT_TRUE(good.passed) << good.min_p_value;
  EXPECT_NEAR(good.threshold, good.family_alpha / good.tests.size(), 1e-15);
  Rng rng2(2024);
  const MonteCarloReport bad =
      *AuditMonteCarlo(Model::kI, 8, 2, 50000, rng2, RpMutation::kUnshuffledSets);
  EXPECT_FALSE(bad.passed);
  EXPECT_LT(bad.min_p_value, bad.threshold);
}

TEST(AuditMonteCarloTest, ModelTwoPasses) {
  Rng rng(7);
  const MonteCarloReport r = *AuditMonteCarlo(Model::kII, 6, 4, 20000, rng);
  EXPECT_TRUE(r.passed) << r.min_p_value;
  EXPECT_GE(r.tests.size(), 2u);
}

TEST(AuditRecoverabilityTest, AllTrialsDecode) {
  Rng rng(3);
  for (Model model : {Model::kI, Model::kII}) {
    const RecoverabilityReport r = *AuditRecoverability(model, 7, 3, 200, Field(7, 2), rng);
    EXPECT_EQ(r.successes, 200);
    EXPECT_TRUE(r.passed());
    EXPECT_TRUE(r.first_failure.empty());
  }
  const RecoverabilityReport trivial = *AuditRecoverability(Model::kII, 5, 1, 200, Field(3, 1), rng);
  EXPECT_TRUE(trivial.passed());
}

TEST(AuditRecoverabilityTest, CorruptedAnswerIsDetected) {
  Rng rng(4);
  const RecoverabilityReport r = *AuditRecoverability(
      Model::kI, 6, 1, 50, Field(5, 1), rng, {.corrupt_demand_answer = true});
  EXPECT_EQ(r.successes, 0);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.first_failure.empty());
}

TEST(MeasureRateTest, Examples) {
  const RateReport a = *MeasureRate(Model::kI, 10, 4);
  EXPECT_EQ(a.elements, 2);
  EXPECT_EQ(a.measured, Rate::Finite(MakeRational(1, 2)));
  EXPECT_TRUE(a.equal);
  const RateReport b = *MeasureRate(Model::kII, 7, 3);
  EXPECT_EQ(b.elements, 2);
  EXPECT_EQ(b.measured, Rate::Finite(MakeRational(1, 2)));
  EXPECT_TRUE(b.equal);
  const RateReport c = *MeasureRate(Model::kII, 5, 5);
  EXPECT_EQ(c.elements, 1);
  EXPECT_EQ(c.measured, Rate::Finite(1));
  const RateReport d = *MeasureRate(Model::kII, 5, 1);
  EXPECT_EQ(d.elements, 0);
  EXPECT_TRUE(d.measured.infinite);
  EXPECT_TRUE(d.equal);
}

TEST(MeasureRateTest, EqualsCapacityOnGrid) {
  for (int K = 2; K <= 12; ++K) {
    for (int M = 0; M < K; ++M) {
      const RateReport r = *MeasureRate(Model::kI, K, M);
      EXPECT_EQ(r.elements, (K + M) / (M + 1)) << "K=" << K << " M=" << M;
      EXPECT_TRUE(r.equal);
    }
    for (int M = 1; M <= K; ++M) {
      const RateReport r = *MeasureRate(Model::kII, K, M);
      const long expected = M == 1 ? 0 : (M == 2 || M == K) ? 1 : 2;
      EXPECT_EQ(r.elements, expected) << "K=" << K << " M=" << M;
      EXPECT_TRUE(r.equal);
    }
  }
}

}  // namespace
}  // namespace pircsi

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

#ifndef PIRCSI_AUDIT_H_
#define PIRCSI_AUDIT_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "pircsi/field.h"
#include "pircsi/pmf.h"
#include "pircsi/protocol_rp.h"
#include "pircsi/random.h"
#include "pircsi/rational.h"
#include "pircsi/rng.h"
#include "pircsi/types.h"

namespace pircsi {

// A RandomSource that walks every outcome of a builder's random choices.
//
// Usage:
//   BranchEnumerator e;
//   do { Build(..., e); Record(fingerprint, e.weight()); } while (e.Advance());
//
// Choose branches over the nonzero masses, Subset over all combinations and
// Partition over all set partitions, each weighted by its probability under
// the seeded sampler. Permutation and Coefficient are pinned (identity and
// smallest allowed value) because the fingerprint does not depend on them.
class BranchEnumerator final : public RandomSource {
 public:
  BranchEnumerator() = default;

  // Probability of the branch just walked.
  const Rational& weight() const { return weight_; }

  // Moves to the next branch; false once every branch has been visited.
  bool Advance();

  size_t Choose(const DiscretePmf& pmf) override;
  std::vector<MessageIndex> Subset(std::span<const MessageIndex> pool, size_t k) override;
  std::vector<std::vector<MessageIndex>> Partition(std::span<const MessageIndex> pool,
                                                   size_t block_size) override;
  std::vector<size_t> Permutation(size_t n) override;
  FieldElement Coefficient(const FieldParamsPtr& params, std::optional<uint32_t> exclude) override;

 private:
  struct Decision {
    uint64_t choice = 0;
    uint64_t count = 0;
  };
  // Returns the option index for the next decision with `count` options.
  uint64_t Decide(uint64_t count);

  std::vector<Decision> path_;
  size_t depth_ = 0;
  Rational weight_ = 1;
};

// The k-subset of pool with lexicographic rank `rank` (pool order preserved).
std::vector<MessageIndex> UnrankCombination(std::span<const MessageIndex> pool, size_t k,
                                            uint64_t rank);

// Total number of branches an exact audit would walk, summed over scenarios.
absl::StatusOr<BigInt> EstimateExactBranches(Model model, int num_messages, int side_size,
                                             RpMutation mutation = RpMutation::kNone);

inline constexpr long long kDefaultMaxExactBranches = 10'000'000;

struct PosteriorRow {
  Fingerprint fingerprint;
  std::vector<Rational> likelihood;  // P(fingerprint | W = w), w = 1..K
  std::vector<Rational> posterior;   // P(W = w | fingerprint)
};

struct PosteriorReport {
  Model model = Model::kI;
  int num_messages = 0;
  int side_size = 0;
  long long branches = 0;
  std::vector<PosteriorRow> rows;  // sorted by fingerprint
  bool uniform = true;
  Rational worst_deviation = 0;    // max |posterior - 1/K|
};

struct ExactAuditOptions {
  RpMutation mutation = RpMutation::kNone;
  long long max_branches = kDefaultMaxExactBranches;
};

// Exact posterior of the demand index given the sorted index structure of the
// query, with W and S drawn from their priors. Fails with ResourceExhausted
// when the enumeration would exceed `max_branches`.
absl::StatusOr<PosteriorReport> AuditExact(Model model, int num_messages, int side_size,
                                           const ExactAuditOptions& options = {});

struct ChiSquareResult {
  std::string name;
  double statistic = 0;
  double dof = 0;
  double p_value = 1;
};

struct MonteCarloReport {
  Model model = Model::kI;
  int num_messages = 0;
  int side_size = 0;
  long long trials = 0;
  size_t fingerprints = 0;
  double family_alpha = 0.01;
  double threshold = 0;           // family_alpha / tests.size()
  std::vector<ChiSquareResult> tests;
  double min_p_value = 1;
  bool passed = true;
};

inline constexpr long long kMinMonteCarloTrials = 10'000;
// Per-fingerprint tests are run only where every cell expects this many hits.
inline constexpr double kMinExpectedPerCell = 10.0;

// Chi-square tests of W against the query: pooled over fingerprints, per
// well-populated fingerprint, and on the slot of the first set holding W.
// Bonferroni-corrected at `family_alpha`.
absl::StatusOr<MonteCarloReport> AuditMonteCarlo(Model model, int num_messages, int side_size,
                                                 long long trials, Rng& rng,
                                                 RpMutation mutation = RpMutation::kNone,
                                                 double family_alpha = 0.01);

// Upper-tail chi-square probability.
double ChiSquareSurvival(double statistic, double dof);

struct RecoverabilityOptions {
  bool corrupt_demand_answer = false;  // adds one to the answer element at the demand slot
};

struct RecoverabilityReport {
  Model model = Model::kI;
  int num_messages = 0;
  int side_size = 0;
  std::string field;
  long long trials = 0;
  long long successes = 0;
  std::string first_failure;
  bool passed() const { return successes == trials; }
};

// Full build, answer and decode loops, each against a fresh random database.
absl::StatusOr<RecoverabilityReport> AuditRecoverability(Model model, int num_messages,
                                                         int side_size, long long trials,
                                                         const FieldParamsPtr& params, Rng& rng,
                                                         const RecoverabilityOptions& options = {});

struct RateReport {
  Model model = Model::kI;
  int num_messages = 0;
  int side_size = 0;
  long long elements = 0;
  Rate measured;
  Rate capacity;
  bool equal = false;
};

// Download of one built query against the capacity formula.
absl::StatusOr<RateReport> MeasureRate(Model model, int num_messages, int side_size);

}  // namespace pircsi

#endif  // PIRCSI_AUDIT_H_

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

#ifndef PIRCSI_PROTOCOL_RP_H_
#define PIRCSI_PROTOCOL_RP_H_

#include <vector>

#include "absl/status/statusor.h"
#include "pircsi/field.h"
#include "pircsi/model.h"
#include "pircsi/pmf.h"
#include "pircsi/query.h"
#include "pircsi/random.h"

namespace pircsi {

// Deliberately broken variants, used to confirm that the privacy auditors
// detect leaks. Never use outside of auditing.
enum class RpMutation {
  kNone,
  kUnshuffledSets,       // the demand set is always sent first
  kDeterministicExtras,  // extras are the smallest eligible indices
  kSkewedPmf,            // (s, r) drawn uniformly over the support
};

// Randomized partitioning for a demand outside the side-information support.
//
// The query covers [K] with n = ceil(K/(M+1)) sets of size M+1. One set is
// {W} u S, carrying a fresh coefficient for W and the true side-information
// coefficients; the remaining sets use fresh coefficients. l = (M+1)n - K
// indices are repeated, chosen through the (s, r) law of ComputeRpDistribution:
// s from S, r from R = [K] \ ({W} u S), plus W itself when s + r = l - 1.
// The r repeated indices from R sit in the second and third sets.
//
// With n = 2 the second set must absorb everything outside {W} u S, which is
// only possible when r = 0; points with r > 0 are removed from the law and
// the remaining masses renormalised (identical to rejecting and redrawing).
class RpQueryBuilder {
 public:
  static absl::StatusOr<RpQueryBuilder> Create(int num_messages, int side_size,
                                               RpMutation mutation = RpMutation::kNone);

  // Pure in the database: only the scenario and `source` are consulted.
  absl::StatusOr<BuiltQuery> Build(const Scenario& scenario, RandomSource& source) const;

  int num_messages() const { return distribution_.num_messages; }
  int side_size() const { return distribution_.side_size; }
  int set_count() const { return distribution_.set_count; }
  int duplicates() const { return distribution_.duplicates; }
  const RpDistribution& distribution() const { return distribution_; }
  // The (s, r) points actually sampled and their masses.
  const std::vector<ExtraCounts>& support() const { return support_; }
  const DiscretePmf& sampling_pmf() const { return sampling_pmf_; }

 private:
  RpQueryBuilder(RpDistribution distribution, RpMutation mutation);

  RpDistribution distribution_;
  RpMutation mutation_;
  std::vector<ExtraCounts> support_;
  DiscretePmf sampling_pmf_;
};

absl::StatusOr<BuiltQuery> RpBuildQuery(const Scenario& scenario, int num_messages,
                                        RandomSource& source);

// Server side; rejects malformed queries.
absl::StatusOr<Answer> RpAnswer(const Database& db, const Query& query);

// X_W = c^{-1} (A_slot - Y).
absl::StatusOr<FieldElement> RpDecode(const Answer& answer, const DecoderState& state);

// Sorted list of sorted index sets: what is left of a query once set order,
// element order and coefficients are forgotten.
using Fingerprint = std::vector<std::vector<MessageIndex>>;

Fingerprint CanonicalFingerprint(const Query& query);

}  // namespace pircsi

#endif  // PIRCSI_PROTOCOL_RP_H_

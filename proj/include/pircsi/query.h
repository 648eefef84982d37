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

#ifndef PIRCSI_QUERY_H_
#define PIRCSI_QUERY_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pircsi/field.h"
#include "pircsi/model.h"
#include "pircsi/random.h"
#include "pircsi/types.h"

namespace pircsi {

// Which construction produced a model-II query. Model-I queries carry kNone.
// The numeric values are the wire encoding.
enum class CaseTag : uint8_t {
  kNone = 0,     // model I, or model II with M = 1 (nothing sent)
  kCase1 = 1,    // M = 2
  kCase2 = 2,    // 3 <= M <= floor(K/2)
  kCase3 = 3,    // floor(K/2)+1 <= M <= K-1
  kCase4 = 4,    // M = K
};

absl::string_view CaseTagName(Model model, CaseTag tag);

// One (index set, coefficient set) pair; coefficients are position-aligned
// with indices and lie in the nonzero base field.
struct QuerySet {
  std::vector<MessageIndex> indices;
  std::vector<FieldElement> coeffs;

  size_t size() const { return indices.size(); }
  friend bool operator==(const QuerySet&, const QuerySet&) = default;
};

// What the server sees.
struct Query {
  Model model = Model::kI;
  CaseTag case_tag = CaseTag::kNone;
  std::vector<QuerySet> sets;

  friend bool operator==(const Query&, const Query&) = default;
};

// One field element per query set, in query order.
struct Answer {
  std::vector<FieldElement> values;

  friend bool operator==(const Answer&, const Answer&) = default;
};

// What the user keeps to itself: the scenario, the slot of the set that
// involves the demand, and the coefficient the demand was sent with.
struct DecoderState {
  uint32_t num_messages = 0;
  CaseTag case_tag = CaseTag::kNone;
  Scenario scenario;
  size_t demand_slot = 0;
  FieldElement demand_coeff;
  // Model II with M = 2: the index actually sent (the demand or its partner).
  MessageIndex probed_index = 0;
};

struct BuiltQuery {
  Query query;
  DecoderState state;
};

// Structural validation a server performs before answering: indices in
// [1, K] and distinct within a set, coefficients nonzero base-field elements
// of `params`, and the per-model shape (equal-size sets for model I, the
// case-specific shape for model II).
absl::Status ValidateQuery(const Query& query, const FieldParamsPtr& params, uint32_t num_messages);

// A_i = sum_j coeffs[j] * X_{indices[j]} for every set, after validation.
absl::StatusOr<Answer> AnswerQuery(const Database& db, const Query& query);

// Applies a uniformly random order to the elements of every set (index and
// coefficient move together) and, when `permute_sets` is set, to the sets
// themselves. Returns the new position of the set that was at `tracked`.
size_t ShuffleQuerySets(std::vector<QuerySet>& sets, size_t tracked, RandomSource& source,
                        bool permute_sets = true);

// Number of field elements the answer to `query` contains.
inline size_t DownloadCount(const Query& query) { return query.sets.size(); }

}  // namespace pircsi

#endif  // PIRCSI_QUERY_H_

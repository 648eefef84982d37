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

#include "pircsi/query.h"

#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "pircsi/status_macros.h"

namespace pircsi {
namespace {

absl::Status ShapeError(absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("malformed query: ", what));
}

absl::Status ValidateShape(const Query& q, uint32_t K) {
  const size_t n = q.sets.size();
  if (q.model == Model::kI) {
    if (q.case_tag != CaseTag::kNone) return ShapeError("model I queries carry no case tag");
    if (n == 0) return ShapeError("model I query has no sets");
    for (const QuerySet& s : q.sets) {
      if (s.size() == 0 || s.size() != q.sets[0].size()) {
        return ShapeError("model I sets must be nonempty and of equal size");
      }
    }
    return absl::OkStatus();
  }
  switch (q.case_tag) {
    case CaseTag::kNone:
      if (n != 0) return ShapeError("side-information-only query must be empty");
      return absl::OkStatus();
    case CaseTag::kCase1:
      if (n != 1 || q.sets[0].size() != 1) return ShapeError("case 1 expects one singleton set");
      return absl::OkStatus();
    case CaseTag::kCase2:
    case CaseTag::kCase3:
      if (n != 2 || q.sets[0].size() != q.sets[1].size() || q.sets[0].size() == 0) {
        return ShapeError("cases 2 and 3 expect two nonempty sets of equal size");
      }
      return absl::OkStatus();
    case CaseTag::kCase4:
      if (n != 1 || q.sets[0].size() != K) return ShapeError("case 4 expects one set covering [K]");
      return absl::OkStatus();
  }
  return ShapeError("unknown case tag");
}

}  // namespace

absl::string_view CaseTagName(Model model, CaseTag tag) {
  if (model == Model::kI) return "partition";
  switch (tag) {
    case CaseTag::kNone:
      return "side-info-only";
    case CaseTag::kCase1:
      return "case1";
    case CaseTag::kCase2:
      return "case2";
    case CaseTag::kCase3:
      return "case3";
    case CaseTag::kCase4:
      return "case4";
  }
  return "unknown";
}

absl::Status ValidateQuery(const Query& query, const FieldParamsPtr& params, uint32_t num_messages) {
  PIRCSI_RETURN_IF_ERROR(ValidateShape(query, num_messages));
  for (size_t i = 0; i < query.sets.size(); ++i) {
    const QuerySet& s = query.sets[i];
    if (s.indices.size() != s.coeffs.size()) {
      return ShapeError(absl::StrCat("set ", i, " has mismatched index and coefficient counts"));
    }
    std::set<MessageIndex> seen;
    for (size_t j = 0; j < s.indices.size(); ++j) {
      const MessageIndex idx = s.indices[j];
      if (idx < 1 || idx > num_messages) {
        return ShapeError(absl::StrCat("index ", idx, " outside [1, ", num_messages, "]"));
      }
      if (!seen.insert(idx).second) {
        return ShapeError(absl::StrCat("index ", idx, " repeated in set ", i));
      }
      const FieldElement& c = s.coeffs[j];
      if (!c.params() || !(*c.params() == *params)) {
        return ShapeError("coefficient from a different field");
      }
      if (c.IsZero() || !c.IsBase()) {
        return ShapeError("coefficients must be nonzero base-field elements");
      }
    }
  }
  return absl::OkStatus();
}

size_t ShuffleQuerySets(std::vector<QuerySet>& sets, size_t tracked, RandomSource& source,
                        bool permute_sets) {
  for (QuerySet& s : sets) {
    const std::vector<size_t> perm = source.Permutation(s.size());
    QuerySet shuffled;
    for (size_t j : perm) {
      shuffled.indices.push_back(s.indices[j]);
      shuffled.coeffs.push_back(s.coeffs[j]);
    }
    s = std::move(shuffled);
  }
  if (!permute_sets) return tracked;
  // perm[slot] is the set sent at `slot`.
  const std::vector<size_t> perm = source.Permutation(sets.size());
  std::vector<QuerySet> reordered;
  reordered.reserve(sets.size());
  size_t slot = 0;
  for (size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] == tracked) slot = i;
    reordered.push_back(std::move(sets[perm[i]]));
  }
  sets = std::move(reordered);
  return slot;
}

absl::StatusOr<Answer> AnswerQuery(const Database& db, const Query& query) {
  PIRCSI_RETURN_IF_ERROR(ValidateQuery(query, db.params(), db.size()));
  Answer answer;
  answer.values.reserve(query.sets.size());
  for (const QuerySet& s : query.sets) {
    FieldElement acc = FieldElement::Zero(db.params());
    for (size_t j = 0; j < s.indices.size(); ++j) acc += s.coeffs[j] * db.message(s.indices[j]);
    answer.values.push_back(std::move(acc));
  }
  return answer;
}

}  // namespace pircsi

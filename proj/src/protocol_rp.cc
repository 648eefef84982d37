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

#include "pircsi/protocol_rp.h"

#include <algorithm>
#include <iterator>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "pircsi/status_macros.h"

namespace pircsi {
namespace {

using IndexList = std::vector<MessageIndex>;

IndexList Minus(const IndexList& a, const IndexList& b) {
  IndexList out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexList Union(const IndexList& a, const IndexList& b) {
  IndexList out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexList Prefix(const IndexList& v, size_t k) { return IndexList(v.begin(), v.begin() + k); }

absl::Status CheckScenario(const Scenario& sc, int K, int M) {
  if (sc.model != Model::kI) {
    return absl::InvalidArgumentError("partitioning protocol needs a model I scenario");
  }
  if (static_cast<int>(sc.support.size()) != M || sc.coeffs.size() != sc.support.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("scenario has side-information size ", sc.support.size(), ", builder expects ", M));
  }
  if (!sc.side_info.params()) return absl::InvalidArgumentError("scenario has no side information");
  if (sc.demand < 1 || sc.demand > static_cast<MessageIndex>(K)) {
    return absl::InvalidArgumentError(absl::StrCat("demand ", sc.demand, " outside [1, ", K, "]"));
  }
  for (size_t i = 0; i < sc.support.size(); ++i) {
    if (sc.support[i] < 1 || sc.support[i] > static_cast<MessageIndex>(K) ||
        (i > 0 && sc.support[i] <= sc.support[i - 1])) {
      return absl::InvalidArgumentError("support must be ascending, distinct and inside [1, K]");
    }
    if (sc.coeffs[i].IsZero()) return absl::InvalidArgumentError("zero side-information coefficient");
  }
  if (Indicator(sc.demand, sc.support) != 0) {
    return absl::InvalidArgumentError("model I demand must lie outside the support");
  }
  return absl::OkStatus();
}

// Sizes, coverage of [K] and the number of repeated indices.
absl::Status CheckStructure(const std::vector<QuerySet>& sets, int K, int M, int n, int l) {
  if (static_cast<int>(sets.size()) != n) {
    return absl::InternalError(absl::StrCat("built ", sets.size(), " sets, expected ", n));
  }
  std::map<MessageIndex, int> seen;
  for (const QuerySet& s : sets) {
    if (static_cast<int>(s.size()) != M + 1) {
      return absl::InternalError(absl::StrCat("set of size ", s.size(), ", expected ", M + 1));
    }
    for (MessageIndex i : s.indices) ++seen[i];
  }
  int repeated = 0;
  for (auto [index, count] : seen) {
    if (count > 2) return absl::InternalError(absl::StrCat("index ", index, " used ", count, " times"));
    if (count == 2) ++repeated;
  }
  if (static_cast<int>(seen.size()) != K || repeated != l) {
    return absl::InternalError(absl::StrCat("sets cover ", seen.size(), " of ", K, " indices with ",
                                            repeated, " repeats, expected ", l));
  }
  return absl::OkStatus();
}

}  // namespace

RpQueryBuilder::RpQueryBuilder(RpDistribution distribution, RpMutation mutation)
    : distribution_(std::move(distribution)), mutation_(mutation) {
  const int n = distribution_.set_count;
  std::vector<Rational> masses;
  for (const auto& [point, mass] : distribution_.table) {
    if (n == 2 && point.second > 0) continue;
    support_.push_back(point);
    masses.push_back(mass);
  }
  Rational total = 0;
  for (const Rational& p : masses) total += p;
  for (Rational& p : masses) {
    p = mutation_ == RpMutation::kSkewedPmf ? MakeRational(1, static_cast<long>(masses.size()))
                                            : Rational(p / total);
  }
  sampling_pmf_ = DiscretePmf(std::move(masses));
}

absl::StatusOr<RpQueryBuilder> RpQueryBuilder::Create(int num_messages, int side_size,
                                                      RpMutation mutation) {
  PIRCSI_ASSIGN_OR_RETURN(RpDistribution d, ComputeRpDistribution(num_messages, side_size));
  return RpQueryBuilder(std::move(d), mutation);
}

absl::StatusOr<BuiltQuery> RpQueryBuilder::Build(const Scenario& sc, RandomSource& source) const {
  const int K = num_messages();
  const int M = side_size();
  const int n = set_count();
  const int l = duplicates();
  PIRCSI_RETURN_IF_ERROR(CheckScenario(sc, K, M));
  const FieldParamsPtr& params = sc.side_info.params();
  const bool deterministic = mutation_ == RpMutation::kDeterministicExtras;

  const FieldElement demand_coeff = source.Coefficient(params, std::nullopt);
  const auto [s, r] = support_[source.Choose(sampling_pmf_)];

  const IndexList& support = sc.support;
  IndexList rest;  // R = [K] \ ({W} u S)
  for (MessageIndex i = 1; i <= static_cast<MessageIndex>(K); ++i) {
    if (i != sc.demand && !std::binary_search(support.begin(), support.end(), i)) rest.push_back(i);
  }

  const IndexList from_support =
      deterministic ? Prefix(support, s) : source.Subset(support, static_cast<size_t>(s));
  const IndexList twice_outside =
      deterministic ? Prefix(rest, r) : source.Subset(rest, static_cast<size_t>(r));  // V
  IndexList extras = Union(from_support, twice_outside);                            // U
  if (s + r == l - 1) extras = Union(extras, {sc.demand});

  std::vector<IndexList> index_sets;
  IndexList first = Union({sc.demand}, support);
  index_sets.push_back(first);

  // Indices still to place once: (U u R) \ V.
  IndexList pool = Minus(Union(extras, rest), twice_outside);
  const size_t fill = static_cast<size_t>(M + 1 - r);
  for (int i = 2; i <= std::min(n, 3); ++i) {
    if (pool.size() < fill) {
      return absl::InternalError(absl::StrCat("pool of ", pool.size(), " cannot fill set ", i));
    }
    IndexList drawn = source.Subset(pool, fill);
    pool = Minus(pool, drawn);
    index_sets.push_back(Union(twice_outside, drawn));
  }
  if (n >= 4) {
    for (IndexList& block : source.Partition(pool, static_cast<size_t>(M + 1))) {
      index_sets.push_back(std::move(block));
    }
    pool.clear();
  }
  if (!pool.empty()) {
    return absl::InternalError(absl::StrCat(pool.size(), " indices left unplaced"));
  }

  std::vector<QuerySet> sets(index_sets.size());
  sets[0].indices = first;
  for (MessageIndex i : first) {
    sets[0].coeffs.push_back(i == sc.demand ? demand_coeff : sc.CoefficientOf(i));
  }
  for (size_t i = 1; i < index_sets.size(); ++i) {
    sets[i].indices = index_sets[i];
    for (size_t j = 0; j < index_sets[i].size(); ++j) {
      sets[i].coeffs.push_back(source.Coefficient(params, std::nullopt));
    }
  }
  PIRCSI_RETURN_IF_ERROR(CheckStructure(sets, K, M, n, l));

  BuiltQuery out;
  out.state.demand_slot =
      ShuffleQuerySets(sets, 0, source, mutation_ != RpMutation::kUnshuffledSets);
  out.query.model = Model::kI;
  out.query.case_tag = CaseTag::kNone;
  out.query.sets = std::move(sets);
  out.state.num_messages = static_cast<uint32_t>(K);
  out.state.case_tag = CaseTag::kNone;
  out.state.scenario = sc;
  out.state.demand_coeff = demand_coeff;
  return out;
}

absl::StatusOr<BuiltQuery> RpBuildQuery(const Scenario& scenario, int num_messages,
                                        RandomSource& source) {
  PIRCSI_ASSIGN_OR_RETURN(
      RpQueryBuilder builder,
      RpQueryBuilder::Create(num_messages, static_cast<int>(scenario.support.size())));
  return builder.Build(scenario, source);
}

absl::StatusOr<Answer> RpAnswer(const Database& db, const Query& query) {
  if (query.model != Model::kI) {
    return absl::InvalidArgumentError("malformed query: expected a model I query");
  }
  return AnswerQuery(db, query);
}

absl::StatusOr<FieldElement> RpDecode(const Answer& answer, const DecoderState& state) {
  if (state.demand_slot >= answer.values.size()) {
    return absl::OutOfRangeError(absl::StrCat("demand slot ", state.demand_slot,
                                              " outside an answer of ", answer.values.size()));
  }
  const FieldElement& a = answer.values[state.demand_slot];
  PIRCSI_ASSIGN_OR_RETURN(FieldElement diff, FfSub(a, state.scenario.side_info));
  PIRCSI_ASSIGN_OR_RETURN(FieldElement inv, FfInv(state.demand_coeff));
  return FfMul(inv, diff);
}

Fingerprint CanonicalFingerprint(const Query& query) {
  Fingerprint fp;
  fp.reserve(query.sets.size());
  for (const QuerySet& s : query.sets) {
    std::vector<MessageIndex> sorted = s.indices;
    std::sort(sorted.begin(), sorted.end());
    fp.push_back(std::move(sorted));
  }
  std::sort(fp.begin(), fp.end());
  return fp;
}

}  // namespace pircsi

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

#include "pircsi/protocol_csi2.h"

#include <algorithm>
#include <iterator>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "pircsi/pmf.h"
#include "pircsi/status_macros.h"

namespace pircsi {
namespace {

using IndexList = std::vector<MessageIndex>;

IndexList Union(const IndexList& a, const IndexList& b) {
  IndexList out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexList Without(const IndexList& a, MessageIndex x) {
  IndexList out;
  std::copy_if(a.begin(), a.end(), std::back_inserter(out), [x](MessageIndex i) { return i != x; });
  return out;
}

IndexList Complement(const IndexList& sorted, int K) {
  IndexList out;
  for (MessageIndex i = 1; i <= static_cast<MessageIndex>(K); ++i) {
    if (!std::binary_search(sorted.begin(), sorted.end(), i)) out.push_back(i);
  }
  return out;
}

absl::Status CheckScenario(const Scenario& sc, int K, int M) {
  if (sc.model != Model::kII) {
    return absl::InvalidArgumentError("model II protocol needs a model II scenario");
  }
  if (static_cast<int>(sc.support.size()) != M || sc.coeffs.size() != sc.support.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("scenario has side-information size ", sc.support.size(), ", builder expects ", M));
  }
  if (!sc.side_info.params()) return absl::InvalidArgumentError("scenario has no side information");
  for (size_t i = 0; i < sc.support.size(); ++i) {
    if (sc.support[i] < 1 || sc.support[i] > static_cast<MessageIndex>(K) ||
        (i > 0 && sc.support[i] <= sc.support[i - 1])) {
      return absl::InvalidArgumentError("support must be ascending, distinct and inside [1, K]");
    }
    if (sc.coeffs[i].IsZero()) return absl::InvalidArgumentError("zero side-information coefficient");
  }
  if (Indicator(sc.demand, sc.support) != 1) {
    return absl::InvalidArgumentError("model II demand must lie inside the support");
  }
  return absl::OkStatus();
}

QuerySet WithTrueCoefficients(const IndexList& indices, const Scenario& sc) {
  QuerySet s;
  s.indices = indices;
  for (MessageIndex i : indices) s.coeffs.push_back(sc.CoefficientOf(i));
  return s;
}

QuerySet WithFreshCoefficients(const IndexList& indices, const FieldParamsPtr& params,
                               RandomSource& source) {
  QuerySet s;
  s.indices = indices;
  for (size_t j = 0; j < indices.size(); ++j) s.coeffs.push_back(source.Coefficient(params, std::nullopt));
  return s;
}

}  // namespace

CaseTag Csi2CaseFor(int num_messages, int side_size) {
  if (side_size <= 1) return CaseTag::kNone;
  if (side_size == 2) return CaseTag::kCase1;
  if (side_size == num_messages) return CaseTag::kCase4;
  if (side_size <= num_messages / 2) return CaseTag::kCase2;
  return CaseTag::kCase3;
}

absl::StatusOr<Csi2QueryBuilder> Csi2QueryBuilder::Create(int num_messages, int side_size) {
  PIRCSI_RETURN_IF_ERROR(ValidateInstance(Model::kII, num_messages, side_size));
  const CaseTag tag = Csi2CaseFor(num_messages, side_size);
  std::vector<int> outcomes;
  std::vector<Rational> masses;
  switch (tag) {
    case CaseTag::kCase1:
      outcomes = {0, 1};  // probe the demand, probe the other support index
      masses = {MakeRational(1, num_messages), MakeRational(num_messages - 1, num_messages)};
      break;
    case CaseTag::kCase2:
    case CaseTag::kCase3: {
      auto law = tag == CaseTag::kCase2 ? Case2Pmf(num_messages, side_size)
                                        : Case3Pmf(num_messages, side_size);
      if (!law.ok()) return law.status();
      for (const auto& [value, mass] : *law) {
        outcomes.push_back(value);
        masses.push_back(mass);
      }
      break;
    }
    default:
      break;
  }
  DiscretePmf pmf = masses.empty() ? DiscretePmf() : DiscretePmf(std::move(masses));
  return Csi2QueryBuilder(num_messages, side_size, tag, std::move(outcomes), std::move(pmf));
}

absl::StatusOr<BuiltQuery> Csi2QueryBuilder::Build(const Scenario& sc, RandomSource& source) const {
  const int K = num_messages_;
  const int M = side_size_;
  PIRCSI_RETURN_IF_ERROR(CheckScenario(sc, K, M));
  const FieldParamsPtr& params = sc.side_info.params();
  const MessageIndex W = sc.demand;
  const FieldElement& c_w = sc.CoefficientOf(W);

  BuiltQuery out;
  out.query.model = Model::kII;
  out.query.case_tag = case_tag_;
  out.state.num_messages = static_cast<uint32_t>(K);
  out.state.case_tag = case_tag_;
  out.state.scenario = sc;
  out.state.demand_coeff = c_w;

  std::vector<QuerySet> sets;
  switch (case_tag_) {
    case CaseTag::kNone:
      return out;
    case CaseTag::kCase1: {
      const MessageIndex other = Without(sc.support, W).front();
      const bool probe_demand = outcomes_[source.Choose(pmf_)] == 0;
      out.state.probed_index = probe_demand ? W : other;
      out.state.demand_coeff = source.Coefficient(params, std::nullopt);
      sets.push_back(QuerySet{{out.state.probed_index}, {out.state.demand_coeff}});
      break;
    }
    case CaseTag::kCase2: {
      const int r = outcomes_[source.Choose(pmf_)];
      const IndexList outside = Complement(sc.support, K);
      IndexList cover = source.Subset(outside, static_cast<size_t>(r));
      if (r == M - 2) cover = Union(cover, {W});
      sets.push_back(WithTrueCoefficients(Without(sc.support, W), sc));
      sets.push_back(WithFreshCoefficients(cover, params, source));
      break;
    }
    case CaseTag::kCase3:
    case CaseTag::kCase4: {
      const FieldElement c = source.Coefficient(params, c_w.BaseValue());
      QuerySet first = WithTrueCoefficients(sc.support, sc);
      for (size_t j = 0; j < first.indices.size(); ++j) {
        if (first.indices[j] == W) first.coeffs[j] = c;
      }
      out.state.demand_coeff = c;
      sets.push_back(std::move(first));
      if (case_tag_ == CaseTag::kCase3) {
        const int s = outcomes_[source.Choose(pmf_)];
        IndexList picked = source.Subset(Without(sc.support, W), static_cast<size_t>(s));
        if (s == 2 * M - K - 1) picked = Union(picked, {W});
        sets.push_back(
            WithFreshCoefficients(Union(picked, Complement(sc.support, K)), params, source));
      }
      break;
    }
  }
  out.state.demand_slot = ShuffleQuerySets(sets, 0, source);
  out.query.sets = std::move(sets);
  return out;
}

absl::StatusOr<BuiltQuery> Csi2BuildQuery(const Scenario& scenario, int num_messages,
                                          RandomSource& source) {
  PIRCSI_ASSIGN_OR_RETURN(
      Csi2QueryBuilder builder,
      Csi2QueryBuilder::Create(num_messages, static_cast<int>(scenario.support.size())));
  return builder.Build(scenario, source);
}

absl::StatusOr<Answer> Csi2Answer(const Database& db, const Query& query) {
  if (query.model != Model::kII) {
    return absl::InvalidArgumentError("malformed query: expected a model II query");
  }
  return AnswerQuery(db, query);
}

absl::StatusOr<FieldElement> Csi2Decode(const Answer& answer, const DecoderState& state) {
  const Scenario& sc = state.scenario;
  if (Indicator(sc.demand, sc.support) != 1) {
    return absl::InvalidArgumentError("decoder state does not hold a model II scenario");
  }
  const FieldElement& y = sc.side_info;
  const FieldElement& c_w = sc.CoefficientOf(sc.demand);
  if (state.case_tag == CaseTag::kNone) {
    if (!answer.values.empty()) return absl::InvalidArgumentError("expected an empty answer");
    PIRCSI_ASSIGN_OR_RETURN(FieldElement inv, FfInv(c_w));
    return FfMul(inv, y);
  }
  if (state.demand_slot >= answer.values.size()) {
    return absl::OutOfRangeError(absl::StrCat("demand slot ", state.demand_slot,
                                              " outside an answer of ", answer.values.size()));
  }
  const size_t expected = state.case_tag == CaseTag::kCase2 || state.case_tag == CaseTag::kCase3 ? 2 : 1;
  if (answer.values.size() != expected) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", expected, " answer elements, got ", answer.values.size()));
  }
  const FieldElement& a = answer.values[state.demand_slot];
  if (!SameField(a, y)) return absl::InvalidArgumentError("answer from a different field");
  switch (state.case_tag) {
    case CaseTag::kCase1: {
      PIRCSI_ASSIGN_OR_RETURN(FieldElement c_inv, FfInv(state.demand_coeff));
      const FieldElement probed = c_inv * a;
      if (state.probed_index == sc.demand) return probed;
      PIRCSI_ASSIGN_OR_RETURN(FieldElement w_inv, FfInv(c_w));
      return w_inv * (y - sc.CoefficientOf(state.probed_index) * probed);
    }
    case CaseTag::kCase2: {
      PIRCSI_ASSIGN_OR_RETURN(FieldElement w_inv, FfInv(c_w));
      return w_inv * (y - a);
    }
    case CaseTag::kCase3:
    case CaseTag::kCase4: {
      PIRCSI_ASSIGN_OR_RETURN(FieldElement inv, FfInv(state.demand_coeff - c_w));
      return inv * (a - y);
    }
    case CaseTag::kNone:
      break;
  }
  return absl::InternalError("unreachable case tag");
}

absl::StatusOr<int> Csi2DownloadCost(int side_size, int num_messages) {
  PIRCSI_RETURN_IF_ERROR(ValidateInstance(Model::kII, num_messages, side_size));
  switch (Csi2CaseFor(num_messages, side_size)) {
    case CaseTag::kNone:
      return 0;
    case CaseTag::kCase1:
    case CaseTag::kCase4:
      return 1;
    case CaseTag::kCase2:
    case CaseTag::kCase3:
      return 2;
  }
  return absl::InternalError("unreachable case tag");
}

}  // namespace pircsi

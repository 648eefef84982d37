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

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "pircsi/random.h"
#include "pircsi/status_macros.h"
#include "pircsi/wire.h"

namespace pircsi {

absl::StatusOr<Database> Database::Create(FieldParamsPtr params,
                                          std::vector<FieldElement> messages) {
  if (!params) return absl::InvalidArgumentError("missing field parameters");
  if (messages.empty()) return absl::InvalidArgumentError("database needs K >= 1 messages");
  for (const FieldElement& x : messages) {
    if (!x.params() || !(*x.params() == *params)) {
      return absl::InvalidArgumentError("message lies in a different field");
    }
  }
  return Database(std::move(params), std::move(messages));
}

Database Database::Random(FieldParamsPtr params, uint32_t num_messages, Rng& rng) {
  std::vector<FieldElement> messages;
  messages.reserve(num_messages);
  for (uint32_t i = 0; i < num_messages; ++i) {
    messages.push_back(FfSample(params, rng, /*nonzero_base=*/false));
  }
  return Database(std::move(params), std::move(messages));
}

std::vector<uint8_t> Database::Serialize() const {
  ByteWriter w;
  w.U32(params_->q());
  w.U32(params_->m());
  w.U32(size());
  for (const FieldElement& x : messages_) w.Element(x);
  return w.Take();
}

absl::StatusOr<Database> Database::Parse(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  PIRCSI_ASSIGN_OR_RETURN(uint32_t q, r.U32("q"));
  PIRCSI_ASSIGN_OR_RETURN(uint32_t m, r.U32("m"));
  const size_t k_offset = r.offset();
  PIRCSI_ASSIGN_OR_RETURN(uint32_t k, r.U32("K"));
  auto params = FieldParams::Create(q, m);
  if (!params.ok()) return ParseError(0, std::string(params.status().message()));
  if (k == 0) return ParseError(k_offset, "database needs K >= 1 messages");
  if (r.remaining() != uint64_t{k} * 2 * m) {
    return ParseError(r.offset(), absl::StrCat("expected ", uint64_t{k} * 2 * m,
                                               " bytes of messages, found ", r.remaining()));
  }
  std::vector<FieldElement> messages;
  messages.reserve(k);
  for (uint32_t i = 0; i < k; ++i) {
    PIRCSI_ASSIGN_OR_RETURN(FieldElement x, r.Element(*params));
    messages.push_back(std::move(x));
  }
  return Database(*std::move(params), std::move(messages));
}

absl::Status Database::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot open ", path, " for writing"));
  const std::vector<uint8_t> bytes = Serialize();
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) return absl::UnavailableError(absl::StrCat("write to ", path, " failed"));
  return absl::OkStatus();
}

absl::StatusOr<Database> Database::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return Parse(bytes);
}

const FieldElement& Scenario::CoefficientOf(MessageIndex index) const {
  auto it = std::lower_bound(support.begin(), support.end(), index);
  return coeffs[static_cast<size_t>(it - support.begin())];
}

absl::StatusOr<Scenario> SampleScenario(const Database& db, int side_size, Model model, Rng& rng) {
  const int K = static_cast<int>(db.size());
  if (model == Model::kI && (side_size < 0 || side_size >= K)) {
    return absl::InvalidArgumentError(
        absl::StrCat("model I requires 0 <= M < K, got M = ", side_size, ", K = ", K));
  }
  if (model == Model::kII && (side_size < 1 || side_size > K)) {
    return absl::InvalidArgumentError(
        absl::StrCat("model II requires 1 <= M <= K, got M = ", side_size, ", K = ", K));
  }
  Scenario sc;
  sc.model = model;
  sc.support = SampleSubset(rng, static_cast<MessageIndex>(K), static_cast<size_t>(side_size));
  for (int i = 0; i < side_size; ++i) {
    sc.coeffs.push_back(FfSample(db.params(), rng, /*nonzero_base=*/true));
  }
  if (model == Model::kII) {
    sc.demand = sc.support[rng.Below(sc.support.size())];
  } else {
    std::vector<MessageIndex> rest;
    for (MessageIndex i = 1; i <= static_cast<MessageIndex>(K); ++i) {
      if (!std::binary_search(sc.support.begin(), sc.support.end(), i)) rest.push_back(i);
    }
    sc.demand = rest[rng.Below(rest.size())];
  }
  PIRCSI_ASSIGN_OR_RETURN(sc.side_info, SideInformation(db, sc.support, sc.coeffs));
  return sc;
}

absl::StatusOr<FieldElement> SideInformation(const Database& db,
                                             std::span<const MessageIndex> support,
                                             std::span<const FieldElement> coeffs) {
  if (support.size() != coeffs.size()) {
    return absl::InvalidArgumentError("support and coefficient lists differ in length");
  }
  std::set<MessageIndex> seen;
  FieldElement y = FieldElement::Zero(db.params());
  for (size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 1 || support[i] > db.size()) {
      return absl::InvalidArgumentError(absl::StrCat("index ", support[i], " outside [1, ", db.size(), "]"));
    }
    if (!seen.insert(support[i]).second) {
      return absl::InvalidArgumentError(absl::StrCat("index ", support[i], " repeated"));
    }
    if (!SameField(coeffs[i], y) || coeffs[i].IsZero() || !coeffs[i].IsBase()) {
      return absl::InvalidArgumentError("coefficients must be nonzero base-field elements");
    }
    y += coeffs[i] * db.message(support[i]);
  }
  return y;
}

int Indicator(MessageIndex demand, std::span<const MessageIndex> support) {
  return std::find(support.begin(), support.end(), demand) != support.end() ? 1 : 0;
}

}  // namespace pircsi

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

#ifndef PIRCSI_MODEL_H_
#define PIRCSI_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "pircsi/field.h"
#include "pircsi/rng.h"
#include "pircsi/types.h"

namespace pircsi {

// The server's K messages X_1..X_K over GF(q^m). Immutable after creation.
class Database {
 public:
  static absl::StatusOr<Database> Create(FieldParamsPtr params, std::vector<FieldElement> messages);
  // K independent uniform messages.
  static Database Random(FieldParamsPtr params, uint32_t num_messages, Rng& rng);

  const FieldParamsPtr& params() const { return params_; }
  uint32_t size() const { return static_cast<uint32_t>(messages_.size()); }
  // 1-based access; `index` must lie in [1, K].
  const FieldElement& message(MessageIndex index) const { return messages_[index - 1]; }
  const std::vector<FieldElement>& messages() const { return messages_; }

  // File layout: q, m, K as little-endian u32, then K elements in canonical
  // encoding (m little-endian u16 coefficients each, lowest degree first).
  std::vector<uint8_t> Serialize() const;
  static absl::StatusOr<Database> Parse(std::span<const uint8_t> bytes);
  absl::Status Save(const std::string& path) const;
  static absl::StatusOr<Database> Load(const std::string& path);

 private:
  Database(FieldParamsPtr params, std::vector<FieldElement> messages)
      : params_(std::move(params)), messages_(std::move(messages)) {}

  FieldParamsPtr params_;
  std::vector<FieldElement> messages_;
};

// One user instance: demand W, side-information support S with coefficients
// C (aligned with ascending S), and the side information Y = sum c_i X_i.
struct Scenario {
  Model model = Model::kI;
  MessageIndex demand = 0;
  std::vector<MessageIndex> support;
  std::vector<FieldElement> coeffs;
  FieldElement side_info;

  size_t side_size() const { return support.size(); }
  // Coefficient attached to `index` in the side information; requires
  // `index` to be in the support.
  const FieldElement& CoefficientOf(MessageIndex index) const;
};

// Draws S uniformly among the M-subsets of [K], C uniformly from the nonzero
// base-field elements, and W uniformly from [K] \ S (model I) or from S
// (model II).
absl::StatusOr<Scenario> SampleScenario(const Database& db, int side_size, Model model, Rng& rng);

// Y = sum_{i in S} c_i X_i; zero for an empty support.
absl::StatusOr<FieldElement> SideInformation(const Database& db,
                                             std::span<const MessageIndex> support,
                                             std::span<const FieldElement> coeffs);

// 1 iff the demand lies in the support.
int Indicator(MessageIndex demand, std::span<const MessageIndex> support);

}  // namespace pircsi

#endif  // PIRCSI_MODEL_H_

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

#ifndef PIRCSI_PROTOCOL_H_
#define PIRCSI_PROTOCOL_H_

#include <variant>

#include "absl/status/statusor.h"
#include "pircsi/protocol_csi2.h"
#include "pircsi/protocol_rp.h"
#include "pircsi/query.h"

namespace pircsi {

// The capacity-achieving protocol for a (model, K, M) instance: randomized
// partitioning for model I, the case construction for model II.
class Protocol {
 public:
  // `mutation` applies to model I only.
  static absl::StatusOr<Protocol> Create(Model model, int num_messages, int side_size,
                                         RpMutation mutation = RpMutation::kNone);

  Model model() const { return model_; }
  int num_messages() const { return num_messages_; }
  int side_size() const { return side_size_; }

  absl::StatusOr<BuiltQuery> Build(const Scenario& scenario, RandomSource& source) const;

 private:
  using Builder = std::variant<RpQueryBuilder, Csi2QueryBuilder>;
  Protocol(Model model, int num_messages, int side_size, Builder builder)
      : model_(model), num_messages_(num_messages), side_size_(side_size), builder_(std::move(builder)) {}

  Model model_;
  int num_messages_;
  int side_size_;
  Builder builder_;
};

// Dispatches to RpAnswer or Csi2Answer by the query's model tag.
absl::StatusOr<Answer> ServeQuery(const Database& db, const Query& query);

// Dispatches to RpDecode or Csi2Decode by the scenario's model.
absl::StatusOr<FieldElement> RecoverDemand(const Answer& answer, const DecoderState& state);

}  // namespace pircsi

#endif  // PIRCSI_PROTOCOL_H_

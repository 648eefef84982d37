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

#include "pircsi/protocol.h"

#include "pircsi/status_macros.h"

namespace pircsi {

absl::StatusOr<Protocol> Protocol::Create(Model model, int num_messages, int side_size,
                                          RpMutation mutation) {
  if (model == Model::kI) {
    PIRCSI_ASSIGN_OR_RETURN(RpQueryBuilder b,
                            RpQueryBuilder::Create(num_messages, side_size, mutation));
    return Protocol(model, num_messages, side_size, std::move(b));
  }
  PIRCSI_ASSIGN_OR_RETURN(Csi2QueryBuilder b, Csi2QueryBuilder::Create(num_messages, side_size));
  return Protocol(model, num_messages, side_size, std::move(b));
}

absl::StatusOr<BuiltQuery> Protocol::Build(const Scenario& scenario, RandomSource& source) const {
  return std::visit([&](const auto& b) { return b.Build(scenario, source); }, builder_);
}

absl::StatusOr<Answer> ServeQuery(const Database& db, const Query& query) {
  return query.model == Model::kI ? RpAnswer(db, query) : Csi2Answer(db, query);
}

absl::StatusOr<FieldElement> RecoverDemand(const Answer& answer, const DecoderState& state) {
  return state.scenario.model == Model::kI ? RpDecode(answer, state) : Csi2Decode(answer, state);
}

}  // namespace pircsi

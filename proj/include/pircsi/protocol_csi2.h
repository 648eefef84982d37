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

#ifndef PIRCSI_PROTOCOL_CSI2_H_
#define PIRCSI_PROTOCOL_CSI2_H_

#include "absl/status/statusor.h"
#include "pircsi/field.h"
#include "pircsi/model.h"
#include "pircsi/query.h"
#include "pircsi/random.h"

namespace pircsi {

// Construction used for a demand inside a support of size M out of K.
// M = 1 sends nothing; M = 2 is case 1 (also when K = 2); M = K >= 3 is
// case 4; otherwise M <= floor(K/2) is case 2 and the rest is case 3.
CaseTag Csi2CaseFor(int num_messages, int side_size);

// Query construction for a demand inside the side-information support.
//
//   case 1: one singleton set, the demand with probability 1/K and the other
//           support index otherwise, with a fresh coefficient.
//   case 2: S \ {W} with its true coefficients, plus a cover set of size M-1
//           drawn from [K] \ S (and W with probability 2(M-1)/K).
//   case 3: S with a coefficient c != c_W at W, plus the cover set
//           ([K] \ S) u U where U holds 2M-K indices of S (W among them with
//           probability 1 - 2(K-M)/K).
//   case 4: [K] with c != c_W at W.
// Cover-set coefficients are fresh and unused by the decoder.
class Csi2QueryBuilder {
 public:
  static absl::StatusOr<Csi2QueryBuilder> Create(int num_messages, int side_size);

  absl::StatusOr<BuiltQuery> Build(const Scenario& scenario, RandomSource& source) const;

  CaseTag case_tag() const { return case_tag_; }
  int num_messages() const { return num_messages_; }
  int side_size() const { return side_size_; }

 private:
  Csi2QueryBuilder(int num_messages, int side_size, CaseTag tag, std::vector<int> outcomes,
                   DiscretePmf pmf)
      : num_messages_(num_messages),
        side_size_(side_size),
        case_tag_(tag),
        outcomes_(std::move(outcomes)),
        pmf_(std::move(pmf)) {}

  int num_messages_;
  int side_size_;
  CaseTag case_tag_;
  // Values of the case-1 selector / case-2 r / case-3 s, aligned with pmf_.
  std::vector<int> outcomes_;
  DiscretePmf pmf_;
};

absl::StatusOr<BuiltQuery> Csi2BuildQuery(const Scenario& scenario, int num_messages,
                                          RandomSource& source);

absl::StatusOr<Answer> Csi2Answer(const Database& db, const Query& query);

// Recovers X_W:
//   M = 1:     c_W^{-1} Y
//   case 1:    c^{-1} A if the demand was probed, else
//              c_W^{-1} (Y - c_o c^{-1} A) for the other support index o
//   case 2:    c_W^{-1} (Y - A)
//   case 3, 4: (c - c_W)^{-1} (A - Y)
// where A is the answer element at the decoder's slot.
absl::StatusOr<FieldElement> Csi2Decode(const Answer& answer, const DecoderState& state);

// Elements downloaded: 0 for M = 1, 1 for M = 2 or M = K, 2 otherwise.
absl::StatusOr<int> Csi2DownloadCost(int side_size, int num_messages);

}  // namespace pircsi

#endif  // PIRCSI_PROTOCOL_CSI2_H_

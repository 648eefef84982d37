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

#ifndef PIRCSI_TYPES_H_
#define PIRCSI_TYPES_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace pircsi {

// 1-based message index in [K].
using MessageIndex = uint32_t;

// Relation between the demand and the side-information support.
enum class Model : uint8_t {
  kI = 1,   // demand outside the support
  kII = 2,  // demand inside the support
};

absl::string_view ModelName(Model model);
absl::StatusOr<Model> ParseModel(absl::string_view text);

}  // namespace pircsi

#endif  // PIRCSI_TYPES_H_

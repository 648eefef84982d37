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

#include "pircsi/types.h"

#include <string>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace pircsi {

absl::string_view ModelName(Model model) { return model == Model::kI ? "I" : "II"; }

absl::StatusOr<Model> ParseModel(absl::string_view text) {
  const std::string upper = absl::AsciiStrToUpper(text);
  if (upper == "I" || upper == "1") return Model::kI;
  if (upper == "II" || upper == "2") return Model::kII;
  return absl::InvalidArgumentError(absl::StrCat("unknown model '", text, "' (expected I or II)"));
}

}  // namespace pircsi

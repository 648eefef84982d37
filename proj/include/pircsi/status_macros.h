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

#ifndef PIRCSI_STATUS_MACROS_H_
#define PIRCSI_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define PIRCSI_CONCAT_INNER_(x, y) x##y
#define PIRCSI_CONCAT_(x, y) PIRCSI_CONCAT_INNER_(x, y)

// Evaluates an expression producing an absl::Status and returns it from the
// enclosing function if it is not OK.
#define PIRCSI_RETURN_IF_ERROR(expr)               \
  do {                                             \
    ::absl::Status pircsi_status_ = (expr);        \
    if (!pircsi_status_.ok()) return pircsi_status_; \
  } while (0)

// Evaluates an expression producing an absl::StatusOr<T>. On error returns the
// status from the enclosing function, otherwise moves the value into `lhs`.
#define PIRCSI_ASSIGN_OR_RETURN(lhs, rexpr) \
  PIRCSI_ASSIGN_OR_RETURN_IMPL_(PIRCSI_CONCAT_(pircsi_statusor_, __LINE__), lhs, rexpr)

#define PIRCSI_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                  \
  if (!statusor.ok()) return statusor.status();             \
  lhs = std::move(statusor).value()

#endif  // PIRCSI_STATUS_MACROS_H_

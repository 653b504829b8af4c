//
// Copyright 2026 The zodp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef ZODP_STATUS_H_
#define ZODP_STATUS_H_

#include <optional>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace zodp {

// Typed failure kinds. The kind travels as a status payload and as a message
// prefix, so callers can branch on it without parsing text.
enum class ErrorKind {
  kInvalidParams,
  kStepSizeTooLarge,
  kCNotContractive,
  kNegativeRadicand,
  kQuadratureNonConvergence,
  kGridMismatch,
  kNoFeasibleK,
  kInfeasibleSchedule,
  kNoFeasibleSchedule,
  kPreconditionViolated,
  kConfigError,
};

std::string_view ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, std::string_view message);

// Returns the kind attached by MakeError, or nullopt for foreign statuses.
std::optional<ErrorKind> GetErrorKind(const absl::Status& status);

bool HasErrorKind(const absl::Status& status, ErrorKind kind);

}  // namespace zodp

#define ZODP_RETURN_IF_ERROR(expr)            \
  do {                                        \
    const absl::Status zodp_status_ = (expr); \
    if (!zodp_status_.ok()) return zodp_status_; \
  } while (0)

#define ZODP_CONCAT_INNER_(a, b) a##b
#define ZODP_CONCAT_(a, b) ZODP_CONCAT_INNER_(a, b)

#define ZODP_ASSIGN_OR_RETURN(lhs, expr) \
  ZODP_ASSIGN_OR_RETURN_IMPL_(ZODP_CONCAT_(zodp_statusor_, __LINE__), lhs, expr)

#define ZODP_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, expr) \
  auto statusor = (expr);                                \
  if (!statusor.ok()) return statusor.status();          \
  lhs = std::move(statusor).value()

#endif  // ZODP_STATUS_H_

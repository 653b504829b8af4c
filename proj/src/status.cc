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

#include "zodp/status.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace zodp {
namespace {

constexpr char kPayloadUrl[] = "type.zodp/error-kind";

constexpr std::array<std::pair<ErrorKind, std::string_view>, 11> kNames = {{
    {ErrorKind::kInvalidParams, "InvalidParams"},
    {ErrorKind::kStepSizeTooLarge, "StepSizeTooLarge"},
    {ErrorKind::kCNotContractive, "CNotContractive"},
    {ErrorKind::kNegativeRadicand, "NegativeRadicand"},
    {ErrorKind::kQuadratureNonConvergence, "QuadratureNonConvergence"},
    {ErrorKind::kGridMismatch, "GridMismatch"},
    {ErrorKind::kNoFeasibleK, "NoFeasibleK"},
    {ErrorKind::kInfeasibleSchedule, "InfeasibleSchedule"},
    {ErrorKind::kNoFeasibleSchedule, "NoFeasibleSchedule"},
    {ErrorKind::kPreconditionViolated, "PreconditionViolated"},
    {ErrorKind::kConfigError, "ConfigError"},
}};

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kQuadratureNonConvergence:
      return absl::StatusCode::kInternal;
    case ErrorKind::kNoFeasibleK:
    case ErrorKind::kInfeasibleSchedule:
    case ErrorKind::kNoFeasibleSchedule:
    case ErrorKind::kPreconditionViolated:
      return absl::StatusCode::kFailedPrecondition;
    default:
      return absl::StatusCode::kInvalidArgument;
  }
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  absl::Status status(CodeFor(kind),
                      absl::StrCat(std::string(ErrorKindName(kind)), ": ",
                                   std::string(message)));
  status.SetPayload(kPayloadUrl, absl::Cord(std::string(ErrorKindName(kind))));
  return status;
}

std::optional<ErrorKind> GetErrorKind(const absl::Status& status) {
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool HasErrorKind(const absl::Status& status, ErrorKind kind) {
  std::optional<ErrorKind> k = GetErrorKind(status);
  return k.has_value() && *k == kind;
}

}  // namespace zodp

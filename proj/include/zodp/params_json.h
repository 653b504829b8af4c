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

// JSON form of ProblemParams, shared by the config file and the reports.

#ifndef ZODP_PARAMS_JSON_H_
#define ZODP_PARAMS_JSON_H_

#include "absl/status/statusor.h"
#include "json.hpp"
#include "zodp/params.h"

namespace zodp {

nlohmann::json ProblemParamsToJson(const ProblemParams& params);

// Strict: unknown keys, missing required keys and wrong types are errors.
// batch is optional; every other field is required.
absl::StatusOr<ProblemParams> ProblemParamsFromJson(const nlohmann::json& j);

}  // namespace zodp

#endif  // ZODP_PARAMS_JSON_H_

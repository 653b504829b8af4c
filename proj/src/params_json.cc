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

#include "zodp/params_json.h"

#include <set>
#include <string>

#include "absl/strings/str_cat.h"
#include "zodp/status.h"

namespace zodp {
namespace {

absl::Status ConfigError(const std::string& message) {
  return MakeError(ErrorKind::kConfigError, message);
}

absl::StatusOr<int64_t> GetInt(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return ConfigError(absl::StrCat("problem.", key, " is missing"));
  const nlohmann::json& v = j.at(key);
  if (!v.is_number_integer()) {
    return ConfigError(absl::StrCat("problem.", key, " must be an integer"));
  }
  return v.get<int64_t>();
}

absl::StatusOr<double> GetDouble(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return ConfigError(absl::StrCat("problem.", key, " is missing"));
  const nlohmann::json& v = j.at(key);
  if (!v.is_number()) return ConfigError(absl::StrCat("problem.", key, " must be a number"));
  return v.get<double>();
}

}  // namespace

nlohmann::json ProblemParamsToJson(const ProblemParams& p) {
  nlohmann::json j = {
      {"d", p.d},     {"n", p.n},         {"K", p.K},         {"eta", p.eta},
      {"sigma", p.sigma}, {"Delta", p.Delta}, {"R", p.R},     {"M", p.M},
      {"m", p.m},     {"xi", p.xi},
      {"convexity", std::string(ConvexityName(p.convexity))},
  };
  if (p.batch.has_value()) j["batch"] = *p.batch;
  return j;
}

absl::StatusOr<ProblemParams> ProblemParamsFromJson(const nlohmann::json& j) {
  if (!j.is_object()) return ConfigError("problem must be an object");
  static const std::set<std::string> kKeys = {
      "d", "n", "K", "eta", "sigma", "Delta", "R", "M", "m", "xi", "batch",
      "convexity"};
  for (const auto& item : j.items()) {
    if (kKeys.count(item.key()) == 0) {
      return ConfigError(absl::StrCat("unknown key problem.", item.key()));
    }
  }
  ProblemParams p;
  ZODP_ASSIGN_OR_RETURN(p.d, GetInt(j, "d"));
  ZODP_ASSIGN_OR_RETURN(p.n, GetInt(j, "n"));
  ZODP_ASSIGN_OR_RETURN(p.K, GetInt(j, "K"));
  ZODP_ASSIGN_OR_RETURN(p.eta, GetDouble(j, "eta"));
  ZODP_ASSIGN_OR_RETURN(p.sigma, GetDouble(j, "sigma"));
  ZODP_ASSIGN_OR_RETURN(p.Delta, GetDouble(j, "Delta"));
  ZODP_ASSIGN_OR_RETURN(p.R, GetDouble(j, "R"));
  ZODP_ASSIGN_OR_RETURN(p.M, GetDouble(j, "M"));
  ZODP_ASSIGN_OR_RETURN(p.m, GetDouble(j, "m"));
  ZODP_ASSIGN_OR_RETURN(p.xi, GetDouble(j, "xi"));
  if (j.contains("batch")) {
    ZODP_ASSIGN_OR_RETURN(int64_t batch, GetInt(j, "batch"));
    p.batch = batch;
  }
  if (!j.contains("convexity") || !j.at("convexity").is_string()) {
    return ConfigError("problem.convexity must be a string");
  }
  absl::StatusOr<Convexity> convexity =
      ParseConvexity(j.at("convexity").get<std::string>());
  if (!convexity.ok()) {
    return ConfigError(absl::StrCat("problem.convexity: ", convexity.status().message()));
  }
  p.convexity = *convexity;
  return p;
}

}  // namespace zodp

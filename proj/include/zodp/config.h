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

// Versioned JSON configuration and the CSV / JSON-lines artifact writers.

#ifndef ZODP_CONFIG_H_
#define ZODP_CONFIG_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "zodp/accountant.h"
#include "zodp/frames.h"
#include "zodp/losses.h"
#include "zodp/params.h"
#include "zodp/verify.h"

namespace zodp {

inline constexpr char kConfigVersion[] = "1";

struct SimulateConfig {
  LossKind loss = LossKind::kQuadratic;
  int64_t T = 100;
  int64_t trials = 1;
  std::vector<double> beta_schedule = {1.0};  // One value or T values.
  uint64_t seed = 0;
  double feature_norm = 1.0;
  bool paired = false;
  int64_t replaced_index = 0;
  FrameMode frame_mode = FrameMode::kStiefel;
  std::optional<std::vector<double>> w0;
};

struct VerifyConfig {
  std::optional<std::vector<CheckRequest>> checks;  // nullopt: default suite.
  uint64_t seed = kDefaultVerifySeed;
};

struct Config {
  std::optional<ProblemParams> problem;
  std::optional<double> delta;
  std::vector<int64_t> T_grid;
  std::optional<std::vector<double>> alpha_grid;  // nullopt: default grid.
  std::optional<std::vector<double>> theta_grid;  // nullopt: default grid.
  double delta_f_fraction = 0.5;
  std::vector<Analysis> analyses;
  std::optional<SimulateConfig> simulate;
  std::optional<VerifyConfig> verify;
  std::optional<std::string> output_path;
};

// Unknown keys anywhere are errors.
absl::StatusOr<Config> ParseConfig(const nlohmann::json& j);
absl::StatusOr<Config> LoadConfigFile(const std::string& path);
nlohmann::json SerializeConfig(const Config& config);

AccountingOptions MakeAccountingOptions(const Config& config);

// Checks the fields the account command needs and that every analysis fits
// the problem (closed_form needs strong convexity, the minibatch analysis
// needs a batch size).
absl::Status ValidateAccountConfig(const Config& config);

inline constexpr char kAccountCsvHeader[] =
    "T,analysis,epsilon,delta,alpha_star,tau_star,theta,beta,delta_p,delta_f";

// One row per (T, analysis) in request order followed by a "min" row.
void WriteAccountCsv(std::ostream& out, const std::vector<CurveRow>& rows);

}  // namespace zodp

#endif  // ZODP_CONFIG_H_

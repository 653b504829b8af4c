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

// Monte Carlo checks of the probabilistic facts the accountant relies on.
// Each check is deterministic given its configuration and seed.

#ifndef ZODP_VERIFY_H_
#define ZODP_VERIFY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "zodp/params.h"

namespace zodp {

struct VerificationReport {
  std::string check;
  nlohmann::json config;
  int64_t samples = 0;
  double observed = 0.0;
  double threshold = 0.0;
  bool pass = false;
  uint64_t seed = 0;
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json ReportToJson(const VerificationReport& report);

// Sum of squared projections of a fixed unit vector on a Stiefel frame
// against Beta(K/2, (d-K)/2) samples drawn as Gamma ratios.
struct BetaIdentityConfig {
  int64_t d = 100;
  int64_t K = 1;
  int64_t samples = 100000;
};

// Exceedance of the realized coefficient sqrt(1 - u + c^2 g) over cbar1,
// with u, g the projected energies of two unit vectors whose cosine is
// `cos_ab`. theta defaults to (1-c^2)/(1+c^2) when c < 1 and to 0 otherwise.
struct LipschitzTailConfig {
  int64_t d = 10000;
  int64_t K = 100;
  double c = 0.1;
  std::optional<double> theta;
  double cos_ab = 0.0;
  int64_t samples = 100000;
};

ProblemParams DefaultWinfParams();
ProblemParams DefaultUtilityParams();

// Coupled adjacent runs on the quadratic loss; sample i of trial i mod n is
// replaced by its negation.
struct WinfConfig {
  ProblemParams params = DefaultWinfParams();
  int64_t trials = 1000;
  int64_t T = 100;
  double beta = 0.5;
  double feature_norm = 10.0;
};

// Mean final loss and injected-noise energy across beta values, with common
// random numbers across beta.
struct UtilityConfig {
  ProblemParams params = DefaultUtilityParams();
  std::vector<double> betas = {0.0, 0.5, 1.0};
  int64_t trials = 200;
  int64_t T = 50;
  double feature_norm = 1.0;
  bool test_hook_mis_scale_noise = false;
};

// Realized coefficient |(I - S) A + c S A| with S = sum_k u_k u_k^T for
// orthonormal and i.i.d. unit directions.
struct IidVsOrthonormalConfig {
  int64_t d = 1000;
  int64_t K = 50;
  double c = 0.5;
  int64_t samples = 100000;
};

using CheckSpec = std::variant<BetaIdentityConfig, LipschitzTailConfig,
                               WinfConfig, UtilityConfig,
                               IidVsOrthonormalConfig>;

struct CheckRequest {
  CheckSpec spec;
  std::optional<uint64_t> seed;  // Falls back to the suite seed.
};

std::string CheckName(const CheckSpec& spec);

absl::StatusOr<VerificationReport> CheckBetaIdentity(
    const BetaIdentityConfig& config, uint64_t seed);
absl::StatusOr<VerificationReport> CheckLipschitzTail(
    const LipschitzTailConfig& config, uint64_t seed);
absl::StatusOr<VerificationReport> CheckWinf(const WinfConfig& config,
                                             uint64_t seed);
absl::StatusOr<VerificationReport> CheckBetaUtilityEquivalence(
    const UtilityConfig& config, uint64_t seed);
absl::StatusOr<VerificationReport> CheckIidVsOrthonormal(
    const IidVsOrthonormalConfig& config, uint64_t seed);

absl::StatusOr<VerificationReport> RunCheck(const CheckSpec& spec,
                                            uint64_t seed);

constexpr uint64_t kDefaultVerifySeed = 20261016;

std::vector<CheckRequest> DefaultSuite();

}  // namespace zodp

#endif  // ZODP_VERIFY_H_

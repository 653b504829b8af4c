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

#include "zodp/verify.h"

#include <algorithm>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace zodp {
namespace {

constexpr uint64_t kSeed = 12345;

TEST(CheckBetaIdentity, PassesOnSmallSample) {
  for (auto [d, K] : {std::pair<int64_t, int64_t>{100, 1}, {40, 7}}) {
    absl::StatusOr<VerificationReport> r = CheckBetaIdentity({d, K, 20000}, kSeed);
    ASSERT_TRUE(r.ok()) << r.status();
    EXPECT_TRUE(r->pass) << ReportToJson(*r).dump();
    EXPECT_EQ(r->check, "beta_identity");
    EXPECT_EQ(r->samples, 20000);
  }
}

TEST(CheckBetaIdentity, FullFrameIsDeterministic) {
  absl::StatusOr<VerificationReport> r = CheckBetaIdentity({6, 6, 200}, kSeed);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->pass);
  EXPECT_LE(r->observed, 1e-10);
  EXPECT_FALSE(CheckBetaIdentity({6, 7, 200}, kSeed).ok());
}

TEST(CheckLipschitzTail, PassesAndVacuousCaseHasNoExceedance) {
  LipschitzTailConfig config;
  config.samples = 20000;
  absl::StatusOr<VerificationReport> r = CheckLipschitzTail(config, kSeed);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_TRUE(r->pass);
  config.c = 1.0;
  config.theta = 0.0;
  config.cos_ab = 0.6;
  r = CheckLipschitzTail(config, kSeed);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->pass);
  EXPECT_GE(r->threshold, 1.0);
  EXPECT_EQ(r->details["cbar1"].get<double>(), 1.0);
}

TEST(CheckLipschitzTail, RejectsBadConfig) {
  LipschitzTailConfig config;
  config.d = 150;
  EXPECT_FALSE(CheckLipschitzTail(config, kSeed).ok());
  config = {};
  config.cos_ab = 1.5;
  EXPECT_FALSE(CheckLipschitzTail(config, kSeed).ok());
}

TEST(CheckWinf, PassesOnSmallRun) {
  WinfConfig config;
  config.trials = 50;
  config.T = 30;
  absl::StatusOr<VerificationReport> r = CheckWinf(config, kSeed);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_TRUE(r->pass) << ReportToJson(*r).dump();
  EXPECT_EQ(r->details["violations"].get<int64_t>(), 0);
}

TEST(CheckBetaUtilityEquivalence, PassesAndMutationFails) {
  UtilityConfig config;
  absl::StatusOr<VerificationReport> ok = CheckBetaUtilityEquivalence(config, kSeed);
  ASSERT_TRUE(ok.ok()) << ok.status();
  EXPECT_TRUE(ok->pass) << ReportToJson(*ok).dump();
  config.test_hook_mis_scale_noise = true;
  absl::StatusOr<VerificationReport> bad = CheckBetaUtilityEquivalence(config, kSeed);
  ASSERT_TRUE(bad.ok());
  EXPECT_FALSE(bad->pass) << ReportToJson(*bad).dump();
}

TEST(CheckBetaUtilityEquivalence, SingleBetaHasNothingToCompare) {
  UtilityConfig config;
  config.betas = {0.5};
  config.trials = 10;
  config.T = 3;
  absl::StatusOr<VerificationReport> r = CheckBetaUtilityEquivalence(config, kSeed);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->observed, 0.0);
  EXPECT_TRUE(r->pass);
  config.params.convexity = Convexity::kConvex;
  config.params.m = 0.0;
  EXPECT_FALSE(CheckBetaUtilityEquivalence(config, kSeed).ok());
}

TEST(CheckIidVsOrthonormal, SingleDirectionSamplersCoincide) {
  IidVsOrthonormalConfig config;
  config.d = 30;
  config.K = 1;
  config.samples = 5000;
  absl::StatusOr<VerificationReport> r = CheckIidVsOrthonormal(config, kSeed);
  ASSERT_TRUE(r.ok()) << r.status();
  for (const char* q : {"q50", "q90", "q99"}) {
    EXPECT_NEAR(r->details["orthonormal"][q].get<double>(),
                r->details["iid"][q].get<double>(), 1e-12);
  }
  EXPECT_EQ(r->details["ecdf_grid"].size(), 99u);
  EXPECT_EQ(r->details["ecdf_orthonormal"].size(), 99u);
  EXPECT_EQ(r->details["ecdf_iid"].size(), 99u);
}

TEST(CheckIidVsOrthonormal, OrthonormalTailIsNoHeavier) {
  IidVsOrthonormalConfig config;
  config.samples = 20000;
  absl::StatusOr<VerificationReport> r = CheckIidVsOrthonormal(config, kSeed);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->pass) << ReportToJson(*r).dump();
}

TEST(RunCheck, DeterministicForFixedSeed) {
  BetaIdentityConfig config{20, 3, 2000};
  const std::string a = ReportToJson(*RunCheck(config, 9)).dump();
  const std::string b = ReportToJson(*RunCheck(config, 9)).dump();
  const std::string c = ReportToJson(*RunCheck(config, 10)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(DefaultSuite, CoversEveryCheck) {
  std::vector<std::string> names;
  for (const CheckRequest& r : DefaultSuite()) names.push_back(CheckName(r.spec));
  for (const char* name : {"beta_identity", "lipschitz_tail", "winf",
                           "beta_utility_equivalence", "iid_vs_orthonormal"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), name), names.end()) << name;
  }
}

TEST(ReportToJson, HasAllFields) {
  VerificationReport r;
  r.check = "winf";
  const nlohmann::json j = ReportToJson(r);
  for (const char* key : {"check", "config", "samples", "observed", "threshold",
                          "pass", "seed", "details"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

}  // namespace
}  // namespace zodp

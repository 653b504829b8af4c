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

#include "zodp/stats.h"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace zodp {
namespace {

// Reference values from scipy.special.kolmogorov.
TEST(KolmogorovSurvival, ReferenceValues) {
  EXPECT_NEAR(KolmogorovSurvival(0.5), 0.9639452436648751, 1e-14);
  EXPECT_NEAR(KolmogorovSurvival(1.0), 0.26999967167735456, 1e-14);
  EXPECT_NEAR(KolmogorovSurvival(2.0), 0.0006709252557796953, 1e-16);
  EXPECT_EQ(KolmogorovSurvival(0.0), 1.0);
  EXPECT_LT(KolmogorovSurvival(10.0), 1e-80);
}

TEST(KsTwoSample, IdenticalAndDisjoint) {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  KsResult same = KsTwoSample(a, a);
  EXPECT_EQ(same.statistic, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
  KsResult apart = KsTwoSample({1, 2, 3}, {10, 11, 12, 13});
  EXPECT_EQ(apart.statistic, 1.0);
  EXPECT_LT(apart.p_value, 0.05);
}

TEST(KsTwoSample, HandComputedStatistic) {
  // ECDF gap peaks after {1, 2} are seen from a and nothing from b.
  KsResult r = KsTwoSample({1, 2, 5, 6}, {3, 4, 7, 8});
  EXPECT_DOUBLE_EQ(r.statistic, 0.5);
}

TEST(KsTwoSample, SameDistributionRarelyRejects) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  int rejections = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(500);
    std::vector<double> b(700);
    for (double& x : a) x = normal(rng);
    for (double& x : b) x = normal(rng);
    rejections += KsTwoSample(a, b).p_value < 0.01;
  }
  EXPECT_LE(rejections, 8);
}

TEST(KsTwoSample, DetectsShift) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  std::vector<double> a(2000);
  std::vector<double> b(2000);
  for (double& x : a) x = normal(rng);
  for (double& x : b) x = normal(rng) + 0.3;
  EXPECT_LT(KsTwoSample(a, b).p_value, 1e-6);
}

TEST(MeanAndSe, Examples) {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  MeanSe m = MeanAndSe(x);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.se, std::sqrt(5.0 / 3.0 / 4.0));
  EXPECT_EQ(MeanAndSe(std::vector<double>{7.0}).se, 0.0);
  EXPECT_EQ(MeanAndSe(std::vector<double>{}).mean, 0.0);
}

TEST(Quantile, LinearInterpolation) {
  const std::vector<double> x = {0.0, 10.0, 20.0};
  EXPECT_EQ(Quantile(x, 0.0), 0.0);
  EXPECT_EQ(Quantile(x, 0.25), 5.0);
  EXPECT_EQ(Quantile(x, 1.0), 20.0);
  EXPECT_TRUE(std::isnan(Quantile(std::vector<double>{}, 0.5)));
}

TEST(EmpiricalCdf, CountsInclusive) {
  const std::vector<double> x = {1.0, 2.0, 2.0, 3.0};
  EXPECT_EQ(EmpiricalCdf(x, 0.5), 0.0);
  EXPECT_EQ(EmpiricalCdf(x, 2.0), 0.75);
  EXPECT_EQ(EmpiricalCdf(x, 9.0), 1.0);
}

TEST(SampleBeta, MatchesMoments) {
  std::mt19937_64 rng(3);
  std::vector<double> x(100000);
  for (double& v : x) v = SampleBeta(2.0, 5.0, rng);
  MeanSe m = MeanAndSe(x);
  EXPECT_NEAR(m.mean, 2.0 / 7.0, 4.0 * m.se);
}

}  // namespace
}  // namespace zodp

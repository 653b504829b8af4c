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

#include "zodp/concentration.h"

#include <cmath>
#include <random>

#include "boost/math/special_functions/beta.hpp"
#include "gtest/gtest.h"
#include "zodp/stats.h"
#include "zodp/status.h"

namespace zodp {
namespace {

ProblemParams LargeStronglyConvex() {
  ProblemParams p;
  p.d = 1000000;
  p.n = 10000;
  p.K = 204;
  p.eta = 204.0;
  p.sigma = 0.05;
  p.Delta = 1.0;
  p.R = 1.0;
  p.M = 1.0;
  p.m = 0.9;
  p.convexity = Convexity::kStronglyConvex;
  return p;
}

// Exact tails of Beta(K/2, (d-K)/2) around its mean K/d.
double UpperTail(int64_t K, int64_t d, double eps) {
  const double x = (1.0 + eps) * K / d;
  if (x >= 1.0) return 0.0;
  return boost::math::ibetac(K / 2.0, (d - K) / 2.0, x);
}

double LowerTail(int64_t K, int64_t d, double eps) {
  const double x = (1.0 - eps) * K / d;
  if (x <= 0.0) return 0.0;
  return boost::math::ibeta(K / 2.0, (d - K) / 2.0, x);
}

TEST(BetaTail, Examples) {
  EXPECT_EQ(*BetaTail(5, 10, 0.0, TailSide::kUpper), 1.0);
  // exp(-3 * 100 * 10000 / (12 * 9900 + 8 * 9800)).
  EXPECT_NEAR(*BetaTail(100, 10000, 1.0, TailSide::kUpper),
              std::exp(-3.0e6 / 197200.0), 1e-20);
  EXPECT_FALSE(BetaTail(6, 11, 0.5, TailSide::kUpper).ok());
  EXPECT_FALSE(BetaTail(1, 10, -0.5, TailSide::kUpper).ok());
}

TEST(BetaTail, BoundsExactTailsOnBothSides) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int64_t> kdist(1, 300);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const int64_t K = kdist(rng);
    const int64_t d = 2 * K + static_cast<int64_t>(unit(rng) * 20000.0);
    const double eps = 3.0 * unit(rng);
    const double bound = *BetaTail(K, d, eps, TailSide::kUpper);
    EXPECT_LE(UpperTail(K, d, eps), bound) << K << " " << d << " " << eps;
    if (eps <= 1.0) {
      EXPECT_LE(LowerTail(K, d, eps), *BetaTail(K, d, eps, TailSide::kLower))
          << K << " " << d << " " << eps;
    }
  }
}

TEST(BetaTail, MonteCarloExceedance) {
  const int64_t K = 100;
  const int64_t d = 10000;
  std::mt19937_64 rng(2026);
  const int samples = 1000000;
  int upper_03 = 0;
  int upper_1 = 0;
  for (int i = 0; i < samples; ++i) {
    const double b = SampleBeta(K / 2.0, (d - K) / 2.0, rng);
    upper_03 += b >= 1.3 * K / d;
    upper_1 += b >= 2.0 * K / d;
  }
  const double p03 = static_cast<double>(upper_03) / samples;
  const double p1 = static_cast<double>(upper_1) / samples;
  EXPECT_LE(p03 - 3.0 * std::sqrt(p03 * (1 - p03) / samples),
            *BetaTail(K, d, 0.3, TailSide::kUpper));
  EXPECT_LE(p1, *BetaTail(K, d, 1.0, TailSide::kUpper) + 3.0 / samples);
  EXPECT_NEAR(p03, UpperTail(K, d, 0.3),
              4.0 * std::sqrt(UpperTail(K, d, 0.3) / samples));
}

TEST(DeltaF, LinearInStepsAndZeroAtZero) {
  TailBoundInputs in{10, 1000, 0.5, 0};
  EXPECT_EQ(*DeltaF(in), 0.0);
  in.steps = 1;
  const double one = *DeltaF(in);
  EXPECT_DOUBLE_EQ(one, 2.0 * *BetaTail(10, 1000, 0.5, TailSide::kUpper));
  in.steps = 37;
  EXPECT_DOUBLE_EQ(*DeltaF(in), 37.0 * one);
  in.steps = -1;
  EXPECT_FALSE(DeltaF(in).ok());
}

TEST(DeltaF, DecreasingInThetaAndK) {
  double prev = 2.0;
  for (double theta : {0.01, 0.1, 0.5, 1.0, 5.0}) {
    const double v = *DeltaF({20, 5000, theta, 1});
    EXPECT_LT(v, prev);
    prev = v;
  }
  prev = 2.0;
  for (int64_t K : {1, 5, 20, 100, 1000}) {
    const double v = *DeltaF({K, 5000, 0.5, 1});
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(MinK, LargeProblem) {
  const ProblemParams p = LargeStronglyConvex();
  EXPECT_EQ(MinKCeilingTerm(p), 14142136.0L);
  absl::StatusOr<double> bound = MinKBound(p, 1e-5);
  ASSERT_TRUE(bound.ok());
  // Evaluated at 50 digits from the same closed form.
  EXPECT_NEAR(*bound, 203.74861928866263, 1e-9);
  absl::StatusOr<int64_t> K = MinK(p, 1e-5);
  ASSERT_TRUE(K.ok());
  EXPECT_EQ(*K, 204);
}

TEST(MinK, DeltaFAtThetaStarFitsHalfDelta) {
  const ProblemParams p = LargeStronglyConvex();
  const double c = 0.1;
  const double theta = (1 - c * c) / (1 + c * c);
  const int64_t steps = static_cast<int64_t>(MinKCeilingTerm(p));
  const double df = *DeltaF({*MinK(p, 1e-5), p.d, theta, steps});
  EXPECT_NEAR(df, 3.7811974263504375e-6, 1e-16);
  EXPECT_LE(df, 0.5e-5);
}

TEST(MinK, GrowsWithoutBoundAsCApproachesOne) {
  ProblemParams p = LargeStronglyConvex();
  p.m = 0.01;
  EXPECT_TRUE(HasErrorKind(MinK(p, 1e-5).status(), ErrorKind::kNoFeasibleK));
  p.m = 0.9;
  p.d = 300;
  EXPECT_TRUE(HasErrorKind(MinK(p, 1e-5).status(), ErrorKind::kNoFeasibleK));
  p = LargeStronglyConvex();
  p.convexity = Convexity::kConvex;
  p.m = 0.0;
  EXPECT_FALSE(MinK(p, 1e-5).ok());
}

TEST(MinK, DoublingNAddsBoundedAmount) {
  ProblemParams p = LargeStronglyConvex();
  for (double m : {0.5, 0.9, 0.99}) {
    p.m = m;
    const double c2 = (1 - m) * (1 - m);
    const double coef = 20.0 * (1 + c2) * (1 + c2) / (3.0 * (1 - c2) * (1 - c2));
    p.n = 1000;
    const int64_t k1 = *MinK(p, 1e-5);
    p.n = 2000;
    const int64_t k2 = *MinK(p, 1e-5);
    EXPECT_GE(k2, k1);
    EXPECT_LE(static_cast<double>(k2 - k1), coef * std::log(2.0) + 1.0);
  }
}

TEST(XiMax, ValueAndScaling) {
  ProblemParams p = LargeStronglyConvex();
  p.K = 100;
  p.eta = 100.0;
  EXPECT_NEAR(*XiMax(p), 1.4142135623730950488e-9, 1e-24);
  p.Delta = 2.0;
  const double doubled = *XiMax(p);
  p.d *= 2;
  EXPECT_NEAR(*XiMax(p) * std::sqrt(2.0), doubled, 1e-24);
}

}  // namespace
}  // namespace zodp

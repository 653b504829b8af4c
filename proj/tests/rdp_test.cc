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

#include "zodp/rdp.h"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "sgm_oracle.h"
#include "zodp/status.h"

namespace zodp {
namespace {

TEST(DefaultAlphaGrid, AscendingAboveOne) {
  const std::vector<double> grid = DefaultAlphaGrid();
  ASSERT_FALSE(grid.empty());
  EXPECT_GT(grid.front(), 1.0);
  EXPECT_EQ(grid.back(), 256.0);
  for (size_t i = 1; i < grid.size(); ++i) EXPECT_GT(grid[i], grid[i - 1]);
  for (int k = 2; k <= 256; ++k) {
    EXPECT_TRUE(RdpCurve::Zero(grid).At(k).ok()) << k;
  }
}

TEST(RdpCurve, CreateValidates) {
  EXPECT_FALSE(RdpCurve::Create({1.0, 2.0}, {0.0, 0.0}).ok());
  EXPECT_FALSE(RdpCurve::Create({3.0, 2.0}, {0.0, 0.0}).ok());
  EXPECT_FALSE(RdpCurve::Create({2.0}, {-1.0}).ok());
  EXPECT_FALSE(RdpCurve::Create({2.0}, {0.0, 1.0}).ok());
  absl::StatusOr<RdpCurve> ok = RdpCurve::Create({2.0, 3.0}, {0.5, 0.75});
  ASSERT_TRUE(ok.ok());
  EXPECT_EQ(*ok->At(3.0), 0.75);
  EXPECT_FALSE(ok->At(2.5).ok());
}

TEST(GaussianRdp, Examples) {
  EXPECT_EQ(*GaussianRdp(2.0, 1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(*GaussianRdp(10.0, 0.2, 4.0), 10.0 * 0.04 / 32.0);
  EXPECT_EQ(*GaussianRdp(5.0, 0.0, 1.0), 0.0);
  EXPECT_FALSE(GaussianRdp(1.0, 1.0, 1.0).ok());
  EXPECT_FALSE(GaussianRdp(2.0, 1.0, 0.0).ok());
}

TEST(Compose, SplittingSensitivityAcrossKCopies) {
  const std::vector<double> grid = DefaultAlphaGrid();
  for (int K : {1, 4, 25, 100}) {
    std::vector<RdpCurve> parts;
    std::vector<double> whole;
    std::vector<double> piece;
    for (double a : grid) {
      whole.push_back(*GaussianRdp(a, 3.0, 2.0));
      piece.push_back(*GaussianRdp(a, 3.0 / std::sqrt(K), 2.0));
    }
    for (int k = 0; k < K; ++k) parts.push_back(*RdpCurve::Create(grid, piece));
    absl::StatusOr<RdpCurve> sum = Compose(parts);
    ASSERT_TRUE(sum.ok());
    for (size_t i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(sum->rhos()[i], whole[i], 1e-12 * whole[i]);
    }
  }
}

TEST(Compose, AddsPointwise) {
  RdpCurve a = *RdpCurve::Create({2.0, 4.0}, {1.0, 2.0});
  RdpCurve b = *RdpCurve::Create({2.0, 4.0}, {0.25, 0.5});
  absl::StatusOr<RdpCurve> c = Compose({a, b, b});
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->rhos(), (std::vector<double>{1.5, 3.0}));
}

TEST(Compose, GridMismatch) {
  RdpCurve a = *RdpCurve::Create({2.0, 4.0}, {1.0, 2.0});
  RdpCurve b = *RdpCurve::Create({2.0, 5.0}, {1.0, 2.0});
  EXPECT_TRUE(HasErrorKind(Compose({a, b}).status(), ErrorKind::kGridMismatch));
  EXPECT_FALSE(Compose({}).ok());
}

TEST(SgmRdp, FullSamplingIsGaussian) {
  for (double sigma : {0.3, 1.0, 5.0}) {
    for (double alpha : {1.5, 2.0, 7.0, 32.5}) {
      EXPECT_NEAR(*SgmRdp(alpha, 1.0, sigma), alpha / (2.0 * sigma * sigma),
                  1e-9);
    }
  }
}

TEST(SgmRdp, TinyRateIsNearlyFree) {
  EXPECT_LT(*SgmRdp(2.0, 1e-8, 1.0), 1e-12);
  EXPECT_LT(*SgmRdp(2.5, 1e-8, 1.0), 1e-12);
}

TEST(SgmRdp, SeriesAgreesWithQuadrature) {
  for (int alpha : {2, 3, 8, 20}) {
    for (double q : {0.001, 0.05, 0.3}) {
      for (double sigma : {0.7, 1.0, 3.0}) {
        absl::StatusOr<double> series = SgmRdpSeries(alpha, q, sigma);
        absl::StatusOr<double> quad = SgmRdpQuadrature(alpha, q, sigma);
        ASSERT_TRUE(series.ok() && quad.ok())
            << alpha << " " << q << " " << sigma << " " << quad.status();
        EXPECT_NEAR(*series, *quad, 1e-8 * std::max(1.0, *series))
            << alpha << " " << q << " " << sigma;
      }
    }
  }
}

TEST(SgmRdp, MonotoneInAlphaAndQ) {
  for (double sigma : {0.8, 2.0}) {
    double prev_alpha = 0.0;
    for (double alpha : {1.2, 1.7, 2.0, 2.5, 4.0, 9.0}) {
      const double rho = *SgmRdp(alpha, 0.05, sigma);
      EXPECT_GE(rho, prev_alpha);
      prev_alpha = rho;
    }
    double prev_q = 0.0;
    for (double q : {0.001, 0.01, 0.1, 0.5, 1.0}) {
      const double rho = *SgmRdp(3.0, q, sigma);
      EXPECT_GE(rho, prev_q);
      prev_q = rho;
    }
  }
}

// Scaling the noise with the sampling rate, S(q, q s) never drops below the
// unsampled Gaussian alpha / (2 s^2).
TEST(SgmRdp, RateScaledNoiseNeverBeatsGaussian) {
  for (double alpha : {1.5, 2.0, 8.0, 32.0}) {
    for (double q : {0.01, 0.1, 0.5, 0.9}) {
      for (double s : {0.5, 2.0, 10.0, 100.0}) {
        absl::StatusOr<double> rho = SgmRdp(alpha, q, q * s);
        ASSERT_TRUE(rho.ok()) << rho.status();
        EXPECT_GE(*rho, alpha / (2.0 * s * s) * (1.0 - 1e-9))
            << alpha << " " << q << " " << s;
      }
    }
  }
}

TEST(SgmRdp, MatchesMonteCarlo) {
  uint64_t seed = 5;
  for (double alpha : {2.0, 3.5}) {
    for (double q : {0.02, 0.2}) {
      for (double sigma : {0.8, 1.5}) {
        const testing::SgmEstimate mc =
            testing::SgmMonteCarlo(alpha, q, sigma, 400000, ++seed);
        const double rho = *SgmRdp(alpha, q, sigma);
        EXPECT_LE(std::abs(rho - mc.rho), 3.0 * mc.se + 1e-15)
            << alpha << " " << q << " " << sigma << " mc=" << mc.rho
            << " se=" << mc.se << " rho=" << rho;
      }
    }
  }
}

// The reported direction upper-bounds the opposite one; the opposite
// direction is integrated here by a plain Riemann sum.
TEST(SgmRdp, DominatesReverseDirection) {
  for (double alpha : {2.0, 4.0}) {
    for (double q : {0.01, 0.1, 0.5}) {
      for (double sigma : {0.7, 1.5}) {
        const double s2 = sigma * sigma;
        const double lo = -15.0 * sigma - 1.0;
        const double hi = 15.0 * sigma + 2.0;
        const int steps = 400000;
        const double h = (hi - lo) / steps;
        double integral = 0.0;
        for (int i = 0; i <= steps; ++i) {
          const double x = lo + i * h;
          const double n0 = std::exp(-x * x / (2.0 * s2)) /
                            std::sqrt(2.0 * M_PI * s2);
          const double ratio = 1.0 + q * std::expm1((2.0 * x - 1.0) / (2.0 * s2));
          integral += n0 * std::pow(ratio, 1.0 - alpha) * h;
        }
        const double reverse = std::log(integral) / (alpha - 1.0);
        EXPECT_LE(reverse, *SgmRdp(alpha, q, sigma) + 1e-9)
            << alpha << " " << q << " " << sigma;
      }
    }
  }
}

TEST(SgmRdp, RejectsBadArguments) {
  EXPECT_FALSE(SgmRdp(1.0, 0.5, 1.0).ok());
  EXPECT_FALSE(SgmRdp(2.0, 0.0, 1.0).ok());
  EXPECT_FALSE(SgmRdp(2.0, 1.5, 1.0).ok());
  EXPECT_FALSE(SgmRdp(2.0, 0.5, -1.0).ok());
}

TEST(RdpToDp, ZeroCurvePicksLargestAlpha) {
  RdpCurve zero = RdpCurve::Zero({2.0, 50.0, 101.0});
  absl::StatusOr<DpConversion> dp = RdpToDp(zero, 0.01);
  ASSERT_TRUE(dp.ok());
  EXPECT_DOUBLE_EQ(dp->epsilon, std::log(100.0) / 100.0);
  EXPECT_EQ(dp->alpha_star, 101.0);
}

TEST(RdpToDp, SinglePoint) {
  absl::StatusOr<DpConversion> dp =
      RdpToDp(*RdpCurve::Create({3.0}, {0.5}), 1e-5);
  ASSERT_TRUE(dp.ok());
  EXPECT_DOUBLE_EQ(dp->epsilon, 0.5 + std::log(1e5) / 2.0);
}

TEST(RdpToDp, GaussianNearContinuousOptimum) {
  const std::vector<double> grid = DefaultAlphaGrid();
  for (double coeff : {0.001, 0.01, 0.1}) {
    std::vector<double> rhos;
    for (double a : grid) rhos.push_back(a * coeff);
    const double delta = 1e-5;
    const double exact = coeff + 2.0 * std::sqrt(coeff * std::log(1.0 / delta));
    absl::StatusOr<DpConversion> dp = RdpToDp(*RdpCurve::Create(grid, rhos), delta);
    ASSERT_TRUE(dp.ok());
    EXPECT_GE(dp->epsilon, exact - 1e-12);
    EXPECT_LE(dp->epsilon, 1.05 * exact);
  }
}

TEST(RdpToDp, MonotoneInCurveAndDelta) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<double> grid = DefaultAlphaGrid();
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> lo;
    std::vector<double> hi;
    for (size_t i = 0; i < grid.size(); ++i) {
      lo.push_back(unit(rng));
      hi.push_back(lo.back() + unit(rng));
    }
    RdpCurve a = *RdpCurve::Create(grid, lo);
    RdpCurve b = *RdpCurve::Create(grid, hi);
    EXPECT_LE(RdpToDp(a, 1e-5)->epsilon, RdpToDp(b, 1e-5)->epsilon);
    EXPECT_LE(RdpToDp(a, 1e-3)->epsilon, RdpToDp(a, 1e-5)->epsilon);
  }
}

TEST(RdpToDp, RejectsBadDelta) {
  RdpCurve zero = RdpCurve::Zero({2.0});
  EXPECT_FALSE(RdpToDp(zero, 0.0).ok());
  EXPECT_FALSE(RdpToDp(zero, 1.0).ok());
  EXPECT_FALSE(RdpToDp(RdpCurve(), 0.5).ok());
}

}  // namespace
}  // namespace zodp

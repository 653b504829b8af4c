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

// Small sample statistics used by the Monte Carlo checks.

#ifndef ZODP_STATS_H_
#define ZODP_STATS_H_

#include <random>
#include <vector>

#include "absl/types/span.h"

namespace zodp {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // Sample standard deviation / sqrt(count).
};

MeanSe MeanAndSe(absl::Span<const double> x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
// Q_KS((sqrt(Ne) + 0.12 + 0.11/sqrt(Ne)) D), Ne = nm/(n+m).
KsResult KsTwoSample(std::vector<double> a, std::vector<double> b);

// Q_KS(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double KolmogorovSurvival(double lambda);

// X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
double SampleBeta(double a, double b, std::mt19937_64& rng);

// Linear interpolation between order statistics; `sorted` must be sorted.
double Quantile(absl::Span<const double> sorted, double p);

// Fraction of `sorted` that is <= x.
double EmpiricalCdf(absl::Span<const double> sorted, double x);

}  // namespace zodp

#endif  // ZODP_STATS_H_

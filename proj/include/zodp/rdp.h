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

// Renyi-divergence primitives: Gaussian and sampled-Gaussian costs,
// composition, and conversion to (epsilon, delta)-DP.

#ifndef ZODP_RDP_H_
#define ZODP_RDP_H_

#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace zodp {

// Integers 2..256 followed by 60 geometric points in (1.01, 2), sorted.
std::vector<double> DefaultAlphaGrid();

// Pairs (alpha, rho) sorted by alpha. rho may be +infinity, never NaN.
class RdpCurve {
 public:
  RdpCurve() = default;

  static absl::StatusOr<RdpCurve> Create(std::vector<double> alphas,
                                         std::vector<double> rhos);
  static RdpCurve Zero(const std::vector<double>& alphas);

  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& rhos() const { return rhos_; }
  size_t size() const { return alphas_.size(); }
  bool empty() const { return alphas_.empty(); }

  // NotFound when alpha is not on the grid.
  absl::StatusOr<double> At(double alpha) const;

 private:
  RdpCurve(std::vector<double> alphas, std::vector<double> rhos)
      : alphas_(std::move(alphas)), rhos_(std::move(rhos)) {}

  std::vector<double> alphas_;
  std::vector<double> rhos_;
};

// alpha * sensitivity^2 / (2 noise_std^2).
absl::StatusOr<double> GaussianRdp(double alpha, double sensitivity,
                                   double noise_std);

// Renyi cost of the sampled Gaussian mechanism with sampling rate q and noise
// multiplier sigma. Integer orders use the binomial expansion, fractional
// orders use quadrature, and q = 1 is the plain Gaussian alpha / (2 sigma^2).
absl::StatusOr<double> SgmRdp(double alpha, double q, double sigma);

// The two evaluation paths, exposed so they can be cross-checked.
absl::StatusOr<double> SgmRdpSeries(int alpha, double q, double sigma);
absl::StatusOr<double> SgmRdpQuadrature(double alpha, double q, double sigma);

// Pointwise sum; every curve must share the same grid.
absl::StatusOr<RdpCurve> Compose(absl::Span<const RdpCurve> curves);

struct DpConversion {
  double epsilon = 0.0;
  double alpha_star = 0.0;
};

// min over the grid of rho(alpha) + log(1/delta) / (alpha - 1). Ties keep the
// smaller alpha.
absl::StatusOr<DpConversion> RdpToDp(const RdpCurve& curve, double delta);

}  // namespace zodp

#endif  // ZODP_RDP_H_

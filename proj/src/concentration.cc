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

#include "absl/strings/str_cat.h"
#include "zodp/status.h"

namespace zodp {
namespace {

absl::Status Invalid(std::string_view message) {
  return MakeError(ErrorKind::kInvalidParams, message);
}

}  // namespace

absl::StatusOr<double> BetaTail(int64_t K, int64_t d, double eps,
                                TailSide side) {
  (void)side;
  if (K < 1 || d < 2 * K) return Invalid("BetaTail needs d >= 2K >= 2");
  if (!(std::isfinite(eps) && eps >= 0.0)) return Invalid("eps must be >= 0");
  const double k = static_cast<double>(K);
  const double dd = static_cast<double>(d);
  const double denom = 12.0 * (dd - k) + 8.0 * (dd - 2.0 * k) * eps;
  return std::exp(-3.0 * eps * eps * k * dd / denom);
}

absl::StatusOr<double> DeltaF(const TailBoundInputs& inputs) {
  if (inputs.steps < 0) return Invalid("steps must be >= 0");
  ZODP_ASSIGN_OR_RETURN(
      double tail, BetaTail(inputs.K, inputs.d, inputs.theta, TailSide::kUpper));
  return 2.0 * static_cast<double>(inputs.steps) * tail;
}

long double MinKCeilingTerm(const ProblemParams& params) {
  const long double x = static_cast<long double>(params.M) * params.R *
                        static_cast<long double>(params.n) *
                        std::sqrt(2.0L * params.d) / params.Delta;
  return std::ceil(x);
}

absl::StatusOr<double> MinKBound(const ProblemParams& params, double delta) {
  ZODP_RETURN_IF_ERROR(ValidateParams(params));
  if (params.convexity != Convexity::kStronglyConvex) {
    return Invalid("MinK applies to strongly convex losses only");
  }
  if (!(delta > 0.0 && delta < 1.0)) return Invalid("delta must lie in (0, 1)");
  const double c = 1.0 - params.m / params.M;
  const double c_sq = c * c;
  if (!(c_sq < 1.0)) {
    return MakeError(ErrorKind::kNoFeasibleK, "c = 1 - m/M is not below 1");
  }
  const double coef = 20.0 * (1.0 + c_sq) * (1.0 + c_sq) /
                      (3.0 * (1.0 - c_sq) * (1.0 - c_sq));
  const double log_term =
      static_cast<double>(std::log(4.0L / delta * MinKCeilingTerm(params)));
  return std::max(coef * log_term, 1.0);
}

absl::StatusOr<int64_t> MinK(const ProblemParams& params, double delta) {
  ZODP_ASSIGN_OR_RETURN(double bound, MinKBound(params, delta));
  const double half_d = static_cast<double>(params.d / 2);
  if (!std::isfinite(bound) || bound > half_d) {
    return MakeError(ErrorKind::kNoFeasibleK,
                     absl::StrCat("K must be >= ", bound, " but d/2 = ",
                                  params.d / 2));
  }
  return static_cast<int64_t>(std::ceil(bound));
}

absl::StatusOr<double> XiMax(const ProblemParams& params) {
  ZODP_RETURN_IF_ERROR(ValidateParams(params));
  return 2.0 * params.Delta /
         (static_cast<double>(params.n) * params.eta * params.M *
          std::sqrt(2.0 * static_cast<double>(params.d)));
}

}  // namespace zodp

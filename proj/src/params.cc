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

#include "zodp/params.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "zodp/status.h"

namespace zodp {
namespace {

bool PositiveFinite(double x) { return std::isfinite(x) && x > 0.0; }

absl::Status Invalid(std::string_view message) {
  return MakeError(ErrorKind::kInvalidParams, message);
}

}  // namespace

std::string_view ConvexityName(Convexity convexity) {
  switch (convexity) {
    case Convexity::kNonconvex:
      return "nonconvex";
    case Convexity::kConvex:
      return "convex";
    case Convexity::kStronglyConvex:
      return "strongly_convex";
  }
  return "unknown";
}

absl::StatusOr<Convexity> ParseConvexity(std::string_view name) {
  for (Convexity c : {Convexity::kNonconvex, Convexity::kConvex,
                      Convexity::kStronglyConvex}) {
    if (ConvexityName(c) == name) return c;
  }
  return Invalid(absl::StrCat("unknown convexity class '", std::string(name), "'"));
}

absl::Status ValidateParams(const ProblemParams& params) {
  if (params.d < 1) return Invalid("d must be >= 1");
  if (params.n < 1) return Invalid("n must be >= 1");
  if (params.K < 1 || params.K > params.d) {
    return Invalid(absl::StrCat("K must lie in [1, d]; got K=", params.K,
                                ", d=", params.d));
  }
  if (!PositiveFinite(params.eta)) return Invalid("eta must be positive");
  if (!PositiveFinite(params.sigma)) return Invalid("sigma must be positive");
  if (!PositiveFinite(params.Delta)) return Invalid("Delta must be positive");
  if (!PositiveFinite(params.R)) return Invalid("R must be positive");
  if (!PositiveFinite(params.M)) return Invalid("M must be positive");
  if (!std::isfinite(params.m) || params.m < 0.0 || params.m > params.M) {
    return Invalid("m must lie in [0, M]");
  }
  if (!std::isfinite(params.xi) || params.xi < 0.0) {
    return Invalid("xi must be non-negative");
  }
  const bool strongly = params.convexity == Convexity::kStronglyConvex;
  if (strongly && params.m <= 0.0) {
    return Invalid("strongly_convex requires m > 0");
  }
  if (!strongly && params.m != 0.0) {
    return Invalid("m > 0 is only meaningful for strongly_convex");
  }
  if (params.batch.has_value() &&
      (*params.batch < 1 || *params.batch > params.n)) {
    return Invalid("batch must lie in [1, n]");
  }
  return absl::OkStatus();
}

absl::Status ValidateHiddenStateParams(const ProblemParams& params) {
  ZODP_RETURN_IF_ERROR(ValidateParams(params));
  if (params.d < 2 * params.K) {
    return Invalid(absl::StrCat("hidden-state accounting needs d >= 2K; got d=",
                                params.d, ", K=", params.K));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> LipschitzC(Convexity convexity, double eta, int64_t K,
                                  double M, double m) {
  if (!std::isfinite(eta) || eta < 0.0 || K < 1 || !PositiveFinite(M) ||
      !std::isfinite(m) || m < 0.0 || m > M) {
    return Invalid("LipschitzC: out-of-domain arguments");
  }
  const double k = static_cast<double>(K);
  switch (convexity) {
    case Convexity::kNonconvex:
      return 1.0 + eta * M / k;
    case Convexity::kConvex:
      if (eta > 2.0 * k / M) {
        return MakeError(ErrorKind::kStepSizeTooLarge,
                         absl::StrCat("convex losses need eta <= 2K/M = ",
                                      2.0 * k / M, "; got ", eta));
      }
      return 1.0;
    case Convexity::kStronglyConvex:
      if (m <= 0.0) return Invalid("strongly_convex requires m > 0");
      if (eta > k / M) {
        return MakeError(ErrorKind::kStepSizeTooLarge,
                         absl::StrCat("strongly convex losses need eta <= K/M = ",
                                      k / M, "; got ", eta));
      }
      return 1.0 - eta * m / k;
  }
  return Invalid("unknown convexity");
}

absl::StatusOr<double> LipschitzC(const ProblemParams& params) {
  return LipschitzC(params.convexity, params.eta, params.K, params.M, params.m);
}

absl::StatusOr<double> ThetaStar(double c) {
  if (!std::isfinite(c) || c < 0.0) return Invalid("ThetaStar needs c >= 0");
  if (c >= 1.0) {
    return MakeError(ErrorKind::kCNotContractive,
                     absl::StrCat("theta* is undefined for c = ", c, " >= 1"));
  }
  const double c_sq = c * c;
  return (1.0 - c_sq) / (1.0 + c_sq);
}

absl::StatusOr<double> CBar1(double c, int64_t K, int64_t d, double theta) {
  if (!std::isfinite(c) || c < 0.0 || K < 1 || d < 2 * K ||
      !std::isfinite(theta) || theta < 0.0) {
    return Invalid("CBar1 needs c >= 0, theta >= 0 and d >= 2K >= 2");
  }
  const double ratio = static_cast<double>(K) / static_cast<double>(d);
  const double c_sq = c * c;
  const double radicand = 1.0 - (1.0 - c_sq) * ratio + theta * (1.0 + c_sq) * ratio;
  if (radicand < 0.0) {
    return MakeError(ErrorKind::kNegativeRadicand,
                     absl::StrCat("radicand ", radicand, " at c=", c,
                                  ", theta=", theta));
  }
  return std::sqrt(radicand);
}

double C2(const ProblemParams& params) {
  return params.eta * params.M * params.xi;
}

absl::StatusOr<DerivedConstants> DeriveConstants(const ProblemParams& params,
                                                 double theta) {
  ZODP_RETURN_IF_ERROR(ValidateHiddenStateParams(params));
  DerivedConstants out;
  ZODP_ASSIGN_OR_RETURN(out.c, LipschitzC(params));
  ZODP_ASSIGN_OR_RETURN(out.cbar1, CBar1(out.c, params.K, params.d, theta));
  out.c2 = C2(params);
  out.theta = theta;
  return out;
}

}  // namespace zodp

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

// Problem parameters and the constants derived from them.

#ifndef ZODP_PARAMS_H_
#define ZODP_PARAMS_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace zodp {

enum class Convexity { kNonconvex, kConvex, kStronglyConvex };

std::string_view ConvexityName(Convexity convexity);
absl::StatusOr<Convexity> ParseConvexity(std::string_view name);

// Every scalar of the update rule. The horizon T is passed separately to the
// operations that need it.
struct ProblemParams {
  int64_t d = 1;
  int64_t n = 1;
  int64_t K = 1;
  double eta = 1.0;
  double sigma = 1.0;
  double Delta = 1.0;
  double R = 1.0;
  double M = 1.0;
  double m = 0.0;
  double xi = 0.0;
  std::optional<int64_t> batch;
  Convexity convexity = Convexity::kConvex;
};

// Eager validation of the domain of every field.
absl::Status ValidateParams(const ProblemParams& params);

// Hidden-state accounting needs d >= 2K on top of ValidateParams.
absl::Status ValidateHiddenStateParams(const ProblemParams& params);

struct DerivedConstants {
  double c = 1.0;
  double cbar1 = 1.0;
  double c2 = 0.0;
  double theta = 0.0;
};

// Lipschitz constant of w -> w - (eta/K) grad L(w). eta may be 0 here.
absl::StatusOr<double> LipschitzC(Convexity convexity, double eta, int64_t K,
                                  double M, double m);
absl::StatusOr<double> LipschitzC(const ProblemParams& params);

// (1 - c^2) / (1 + c^2); requires 0 <= c < 1.
absl::StatusOr<double> ThetaStar(double c);

// sqrt(1 - (1 - c^2) K/d + theta (1 + c^2) K/d).
absl::StatusOr<double> CBar1(double c, int64_t K, int64_t d, double theta);

// eta * M * xi.
double C2(const ProblemParams& params);

absl::StatusOr<DerivedConstants> DeriveConstants(const ProblemParams& params,
                                                 double theta);

}  // namespace zodp

#endif  // ZODP_PARAMS_H_

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

// Beta tail bounds, the Lipschitz-event failure probability delta_f, and the
// K / xi feasibility limits of the strongly convex closed form.

#ifndef ZODP_CONCENTRATION_H_
#define ZODP_CONCENTRATION_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "zodp/params.h"

namespace zodp {

enum class TailSide { kUpper, kLower };

// Bound on P(X > (1+eps) K/d) (upper) or P(X < (1-eps) K/d) (lower) for
// X ~ Beta(K/2, (d-K)/2). The same expression serves both sides.
absl::StatusOr<double> BetaTail(int64_t K, int64_t d, double eps,
                                TailSide side);

struct TailBoundInputs {
  int64_t K = 1;
  int64_t d = 2;
  double theta = 0.0;
  int64_t steps = 0;
};

// 2 * steps * BetaTail(K, d, theta). Not clamped to 1.
absl::StatusOr<double> DeltaF(const TailBoundInputs& inputs);

// ceil(M R n sqrt(2d) / Delta), the step count inside the min-K logarithm.
long double MinKCeilingTerm(const ProblemParams& params);

// Real-valued lower bound on K: max(coef * log(4/delta * ceiling), 1) with
// coef = 20 (1+c^2)^2 / (3 (1-c^2)^2) and c = 1 - m/M.
absl::StatusOr<double> MinKBound(const ProblemParams& params, double delta);

// Smallest integer K meeting MinKBound; NoFeasibleK above d/2.
absl::StatusOr<int64_t> MinK(const ProblemParams& params, double delta);

// 2 Delta / (n eta M sqrt(2d)).
absl::StatusOr<double> XiMax(const ProblemParams& params);

}  // namespace zodp

#endif  // ZODP_CONCENTRATION_H_

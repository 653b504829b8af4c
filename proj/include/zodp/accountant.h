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

// Privacy accountants for noisy zeroth-order descent: the hidden-state
// shift-schedule bound, its strongly convex closed form, the sampled variant,
// and the public-state and output-perturbation baselines.

#ifndef ZODP_ACCOUNTANT_H_
#define ZODP_ACCOUNTANT_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "zodp/params.h"
#include "zodp/rdp.h"

namespace zodp {

enum class Analysis {
  kHiddenState,
  kCompositionBeta1,
  kCompositionBeta0,
  kOutputPerturbation,
  kClosedForm,
  kMinibatchHiddenState,
};

std::string_view AnalysisName(Analysis analysis);
absl::StatusOr<Analysis> ParseAnalysis(std::string_view name);

// Shift schedule over steps t = tau..T-1. beta[j] and a[j] belong to step
// tau + j; z[j] is z_{tau+j}, so z has one more entry and z.back() is z_T.
struct Schedule {
  int64_t T = 0;
  int64_t tau = 0;
  std::vector<double> beta;
  std::vector<double> a;
  std::vector<double> z;
};

struct AccountResult {
  Analysis analysis = Analysis::kHiddenState;
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha_star = 0.0;
  std::optional<int64_t> tau_star;
  std::optional<double> theta;
  std::optional<double> beta;  // At alpha_star.
  double delta_p = 0.0;
  double delta_f = 0.0;
  std::optional<Schedule> schedule;
  RdpCurve rdp;  // Pre-conversion curve of the reported analysis.
};

// Geometric grid of 64 points in [1e-3, 1e2], used when c >= 1.
std::vector<double> DefaultThetaGrid();

struct AccountingOptions {
  std::vector<double> alpha_grid = DefaultAlphaGrid();
  std::vector<double> theta_grid = DefaultThetaGrid();
  // Largest share of delta that delta_f may consume.
  double delta_f_fraction = 0.5;
  // Schedules longer than this are not materialized in the result.
  int64_t max_schedule_length = 10'000'000;
};

// min(2R, 2 eta Delta t / sqrt(K)).
double WinfBound(int64_t t, const ProblemParams& params);

// Independent re-check of the z-recursion: z_T = 0,
// z_t = (z_{t+1} + a_t - c2) / cbar1, z_t >= 0, z_tau >= WinfBound(tau).
// The tau = 0 schedule with a = z = 0 is accepted for every c2: both
// processes then start together and stay together, so no shift is needed.
absl::Status CheckScheduleFeasible(const ProblemParams& params,
                                   const Schedule& schedule,
                                   const DerivedConstants& consts);

// Sum over the schedule of alpha (2 Delta/n)^2 / (2 beta_t sigma^2) +
// alpha a_t^2 d / (2 eta^2 (1 - beta_t) sigma^2). The second summand is 0
// when a_t = 0; infinite terms yield +infinity.
absl::StatusOr<double> RhoForSchedule(const ProblemParams& params,
                                      const Schedule& schedule, double alpha,
                                      const DerivedConstants& consts);

absl::StatusOr<AccountResult> OptimizeHiddenState(
    const ProblemParams& params, int64_t T, double delta,
    const AccountingOptions& options = {});

// Same search with the per-step directional cost replaced by the sampled
// Gaussian bound at rate batch/n.
absl::StatusOr<AccountResult> MinibatchHiddenState(
    const ProblemParams& params, int64_t T, double delta,
    const AccountingOptions& options = {});

// Explicit-constant strongly convex bound:
// rho(alpha) = min(alpha T (2 Delta/n)^2 / (2 sigma^2),
//                  8 alpha Delta R sqrt(2d) / (eta n sigma^2)).
absl::StatusOr<AccountResult> ClosedFormStronglyConvex(
    const ProblemParams& params, double delta, int64_t T,
    const AccountingOptions& options = {});

enum class CompositionVariant { kBeta1, kBeta0 };

absl::StatusOr<AccountResult> CompositionBaseline(
    const ProblemParams& params, double delta, int64_t T,
    CompositionVariant variant, const AccountingOptions& options = {});

absl::StatusOr<AccountResult> OutputPerturbation(
    const ProblemParams& params, double delta,
    const AccountingOptions& options = {});

absl::StatusOr<AccountResult> RunAnalysis(Analysis analysis,
                                          const ProblemParams& params,
                                          double delta, int64_t T,
                                          const AccountingOptions& options);

struct CurveRow {
  int64_t T = 0;
  std::vector<AccountResult> results;  // In the order of `analyses`.
  AccountResult min;                   // Copy of the smallest-epsilon result.
};

// Rows are computed on up to `threads` workers; output order and values do
// not depend on the thread count.
absl::StatusOr<std::vector<CurveRow>> AccountCurve(
    const ProblemParams& params, double delta,
    const std::vector<int64_t>& T_grid, const std::vector<Analysis>& analyses,
    const AccountingOptions& options = {}, int threads = 1);

}  // namespace zodp

#endif  // ZODP_ACCOUNTANT_H_

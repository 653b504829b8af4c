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

// Noisy zeroth-order descent: the two-point estimator, the update with split
// directional / isotropic noise, full runs and coupled adjacent runs.

#ifndef ZODP_ZOGD_H_
#define ZODP_ZOGD_H_

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "zodp/frames.h"
#include "zodp/losses.h"
#include "zodp/params.h"

namespace zodp {

// y / max(1, |y| / Delta).
double Clip(double y, double Delta);

// sum_k s_k u_k where s_k is the mean over `indices` of the clipped central
// difference (l_i(w + xi u_k) - l_i(w - xi u_k)) / (2 xi). xi = 0 uses the
// analytic directional derivative <grad l_i(w), u_k> instead.
Eigen::VectorXd ZoGradient(const Eigen::VectorXd& w,
                           const DirectionFrame& frame, const LossOracle& loss,
                           absl::Span<const int64_t> indices, double xi,
                           double Delta);

// Unit-variance draws of one step: g1 has K entries, g2 has d.
struct StepNoise {
  Eigen::VectorXd g1;
  Eigen::VectorXd g2;
};

StepNoise DrawStepNoise(uint64_t seed, int64_t t, int64_t K, int64_t d);

// (eta/sqrt(K)) U (sqrt(beta) sigma g1) + (eta/sqrt(d)) sqrt(1-beta) sigma g2.
// mis_scale_noise is a test hook that uses variance beta sigma instead of
// beta sigma^2 for the directional part.
Eigen::VectorXd InjectedNoise(const DirectionFrame& frame,
                              const StepNoise& noise,
                              const ProblemParams& params, double beta,
                              bool mis_scale_noise = false);

// Euclidean projection onto the ball of radius R.
Eigen::VectorXd ProjectToBall(Eigen::VectorXd w, double R);

// Pi_R[w - (eta/K) zo + InjectedNoise(...)].
Eigen::VectorXd NoisyZogdStep(const Eigen::VectorXd& w,
                              const DirectionFrame& frame,
                              const Eigen::VectorXd& zo,
                              const StepNoise& noise,
                              const ProblemParams& params, double beta,
                              bool mis_scale_noise = false);

struct RunOptions {
  int64_t T = 0;
  // Either one value for every step or exactly T values.
  std::vector<double> beta = {1.0};
  uint64_t seed = 0;
  FrameMode frame_mode = FrameMode::kStiefel;
  Eigen::VectorXd w0;  // Empty means the origin.
  bool record_draws = false;
  bool mis_scale_noise = false;
};

struct Trajectory {
  uint64_t seed = 0;
  std::vector<Eigen::VectorXd> w;  // w_0..w_T
  // Filled when record_draws is set.
  std::vector<Eigen::MatrixXd> frames;
  std::vector<StepNoise> noise;
  std::vector<std::vector<int64_t>> batches;
};

// Full batch when params.batch is unset or equals n; otherwise batch indices
// are drawn without replacement independently at every step.
absl::StatusOr<Trajectory> Run(const ProblemParams& params,
                               const LossOracle& loss,
                               const RunOptions& options);

// Both runs share every frame, noise draw and batch; only sample
// replaced_index differs.
absl::StatusOr<std::pair<Trajectory, Trajectory>> RunAdjacentPair(
    const ProblemParams& params, const LossOracle& loss,
    int64_t replaced_index, const Eigen::VectorXd& replacement,
    const RunOptions& options);

// Columns t,norm_w,loss and, when `adjacent` is given, distance.
void WriteTrajectoryCsv(std::ostream& out, const Trajectory& trajectory,
                        const LossOracle& loss,
                        const Trajectory* adjacent = nullptr);

}  // namespace zodp

#endif  // ZODP_ZOGD_H_

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

#include "zodp/zogd.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "absl/strings/str_cat.h"
#include "zodp/format.h"
#include "zodp/rng.h"
#include "zodp/status.h"

namespace zodp {
namespace {

absl::Status Invalid(std::string_view message) {
  return MakeError(ErrorKind::kInvalidParams, message);
}

absl::Status ValidateRun(const ProblemParams& params, const LossOracle& loss,
                         const RunOptions& options) {
  ZODP_RETURN_IF_ERROR(ValidateParams(params));
  if (loss.dim() != params.d || loss.n() != params.n) {
    return Invalid(absl::StrCat("loss has dim ", loss.dim(), " and n ", loss.n(),
                                "; params say d=", params.d, ", n=", params.n));
  }
  if (options.T < 0) return Invalid("T must be >= 0");
  const size_t size = options.beta.size();
  if (size != 1 && static_cast<int64_t>(size) != options.T) {
    return Invalid("beta schedule needs 1 or T entries");
  }
  for (double b : options.beta) {
    if (!(b >= 0.0 && b <= 1.0)) return Invalid("beta must lie in [0, 1]");
  }
  if (options.w0.size() != 0 && options.w0.size() != params.d) {
    return Invalid("w0 has the wrong dimension");
  }
  return absl::OkStatus();
}

std::vector<int64_t> StepBatch(const ProblemParams& params, uint64_t seed,
                               int64_t t) {
  std::vector<int64_t> all(params.n);
  std::iota(all.begin(), all.end(), 0);
  if (!params.batch.has_value() || *params.batch == params.n) return all;
  std::mt19937_64 rng = MakeStream(seed, t, 0, Purpose::kBatch);
  std::vector<int64_t> batch;
  batch.reserve(*params.batch);
  std::sample(all.begin(), all.end(), std::back_inserter(batch), *params.batch,
              rng);
  return batch;
}

}  // namespace

double Clip(double y, double Delta) {
  return y / std::max(1.0, std::abs(y) / Delta);
}

Eigen::VectorXd ZoGradient(const Eigen::VectorXd& w,
                           const DirectionFrame& frame, const LossOracle& loss,
                           absl::Span<const int64_t> indices, double xi,
                           double Delta) {
  const Eigen::MatrixXd& U = frame.U;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(U.rows());
  if (indices.empty()) return out;
  const double inv_count = 1.0 / static_cast<double>(indices.size());
  for (Eigen::Index k = 0; k < U.cols(); ++k) {
    const Eigen::VectorXd u = U.col(k);
    double s = 0.0;
    if (xi == 0.0) {
      for (int64_t i : indices) s += Clip(loss.SampleGradient(w, i).dot(u), Delta);
    } else {
      const Eigen::VectorXd plus = w + xi * u;
      const Eigen::VectorXd minus = w - xi * u;
      for (int64_t i : indices) {
        const double diff =
            (loss.SampleValue(plus, i) - loss.SampleValue(minus, i)) / (2.0 * xi);
        s += Clip(diff, Delta);
      }
    }
    out += (s * inv_count) * u;
  }
  return out;
}

StepNoise DrawStepNoise(uint64_t seed, int64_t t, int64_t K, int64_t d) {
  std::mt19937_64 r1 = MakeStream(seed, t, 0, Purpose::kDirectionalNoise);
  std::mt19937_64 r2 = MakeStream(seed, t, 0, Purpose::kIsotropicNoise);
  return {StandardNormalVector(K, r1), StandardNormalVector(d, r2)};
}

Eigen::VectorXd InjectedNoise(const DirectionFrame& frame,
                              const StepNoise& noise,
                              const ProblemParams& params, double beta,
                              bool mis_scale_noise) {
  const double dir_std = mis_scale_noise ? std::sqrt(beta * params.sigma)
                                         : std::sqrt(beta) * params.sigma;
  const double iso_std = std::sqrt(1.0 - beta) * params.sigma;
  const double k = static_cast<double>(params.K);
  const double d = static_cast<double>(params.d);
  return (params.eta / std::sqrt(k) * dir_std) * (frame.U * noise.g1) +
         (params.eta / std::sqrt(d) * iso_std) * noise.g2;
}

Eigen::VectorXd ProjectToBall(Eigen::VectorXd w, double R) {
  const double norm = w.norm();
  if (norm > R) w *= R / norm;
  return w;
}

Eigen::VectorXd NoisyZogdStep(const Eigen::VectorXd& w,
                              const DirectionFrame& frame,
                              const Eigen::VectorXd& zo,
                              const StepNoise& noise,
                              const ProblemParams& params, double beta,
                              bool mis_scale_noise) {
  const double k = static_cast<double>(params.K);
  Eigen::VectorXd next = w - (params.eta / k) * zo +
                         InjectedNoise(frame, noise, params, beta, mis_scale_noise);
  return ProjectToBall(std::move(next), params.R);
}

absl::StatusOr<Trajectory> Run(const ProblemParams& params,
                               const LossOracle& loss,
                               const RunOptions& options) {
  ZODP_RETURN_IF_ERROR(ValidateRun(params, loss, options));
  Trajectory traj;
  traj.seed = options.seed;
  traj.w.reserve(options.T + 1);
  traj.w.push_back(options.w0.size() == 0
                       ? Eigen::VectorXd::Zero(params.d).eval()
                       : options.w0);
  for (int64_t t = 0; t < options.T; ++t) {
    std::mt19937_64 frame_rng = MakeStream(options.seed, t, 0, Purpose::kFrame);
    ZODP_ASSIGN_OR_RETURN(
        DirectionFrame frame,
        SampleFrame(params.d, params.K, options.frame_mode, frame_rng));
    const StepNoise noise = DrawStepNoise(options.seed, t, params.K, params.d);
    const std::vector<int64_t> batch = StepBatch(params, options.seed, t);
    const double beta = options.beta.size() == 1 ? options.beta[0] : options.beta[t];
    const Eigen::VectorXd& w = traj.w.back();
    const Eigen::VectorXd zo =
        ZoGradient(w, frame, loss, batch, params.xi, params.Delta);
    traj.w.push_back(NoisyZogdStep(w, frame, zo, noise, params, beta,
                                   options.mis_scale_noise));
    if (options.record_draws) {
      traj.frames.push_back(frame.U);
      traj.noise.push_back(noise);
      traj.batches.push_back(batch);
    }
  }
  return traj;
}

absl::StatusOr<std::pair<Trajectory, Trajectory>> RunAdjacentPair(
    const ProblemParams& params, const LossOracle& loss,
    int64_t replaced_index, const Eigen::VectorXd& replacement,
    const RunOptions& options) {
  if (replaced_index < 0 || replaced_index >= loss.n()) {
    return Invalid("replaced_index outside [0, n)");
  }
  if (replacement.size() != loss.dim()) {
    return Invalid("replacement sample has the wrong dimension");
  }
  const std::unique_ptr<LossOracle> adjacent =
      loss.WithReplacement(replaced_index, replacement);
  ZODP_ASSIGN_OR_RETURN(Trajectory first, Run(params, loss, options));
  ZODP_ASSIGN_OR_RETURN(Trajectory second, Run(params, *adjacent, options));
  return std::make_pair(std::move(first), std::move(second));
}

void WriteTrajectoryCsv(std::ostream& out, const Trajectory& trajectory,
                        const LossOracle& loss, const Trajectory* adjacent) {
  out << "t,norm_w,loss" << (adjacent != nullptr ? ",distance" : "") << "\n";
  for (size_t t = 0; t < trajectory.w.size(); ++t) {
    const Eigen::VectorXd& w = trajectory.w[t];
    out << t << "," << FormatDouble(w.norm()) << "," << FormatDouble(loss.Value(w));
    if (adjacent != nullptr) {
      out << "," << FormatDouble((w - adjacent->w[t]).norm());
    }
    out << "\n";
  }
}

}  // namespace zodp

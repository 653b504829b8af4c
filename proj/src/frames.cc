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

#include "zodp/frames.h"

#include <string>

#include "absl/strings/str_cat.h"
#include "zodp/status.h"

namespace zodp {

std::string_view FrameModeName(FrameMode mode) {
  return mode == FrameMode::kStiefel ? "stiefel" : "iid_sphere";
}

absl::StatusOr<FrameMode> ParseFrameMode(std::string_view name) {
  if (name == "stiefel") return FrameMode::kStiefel;
  if (name == "iid_sphere") return FrameMode::kIidSphere;
  return MakeError(ErrorKind::kConfigError,
                   absl::StrCat("unknown frame mode '", std::string(name), "'"));
}

Eigen::VectorXd StandardNormalVector(int64_t size, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(size);
  for (int64_t i = 0; i < size; ++i) v[i] = normal(rng);
  return v;
}

absl::StatusOr<DirectionFrame> SampleFrame(int64_t d, int64_t K,
                                           FrameMode mode,
                                           std::mt19937_64& rng) {
  if (K < 1 || K > d) {
    return MakeError(ErrorKind::kInvalidParams,
                     absl::StrCat("frame needs 1 <= K <= d (K=", K, ", d=", d, ")"));
  }
  std::normal_distribution<double> normal;
  Eigen::MatrixXd G(d, K);
  // Column-major fill: column k only depends on the draws before it.
  for (int64_t k = 0; k < K; ++k) {
    for (int64_t i = 0; i < d; ++i) G(i, k) = normal(rng);
  }
  DirectionFrame frame;
  frame.mode = mode;
  if (mode == FrameMode::kIidSphere) {
    for (int64_t k = 0; k < K; ++k) G.col(k).normalize();
    frame.U = std::move(G);
    return frame;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  frame.U = qr.householderQ() * Eigen::MatrixXd::Identity(d, K);
  const Eigen::MatrixXd& packed = qr.matrixQR();
  for (int64_t k = 0; k < K; ++k) {
    if (packed(k, k) < 0.0) frame.U.col(k) *= -1.0;
  }
  return frame;
}

}  // namespace zodp

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

// Random direction frames for the zeroth-order estimator.

#ifndef ZODP_FRAMES_H_
#define ZODP_FRAMES_H_

#include <cstdint>
#include <random>
#include <string_view>

#include "Eigen/Dense"
#include "absl/status/statusor.h"

namespace zodp {

enum class FrameMode { kStiefel, kIidSphere };

std::string_view FrameModeName(FrameMode mode);
absl::StatusOr<FrameMode> ParseFrameMode(std::string_view name);

struct DirectionFrame {
  Eigen::MatrixXd U;  // d x K
  FrameMode mode = FrameMode::kStiefel;
};

// Stiefel: thin Q of a Gaussian d x K matrix with the signs of diag(R) moved
// into Q, which makes the law invariant under left rotations. iid: each
// column is an independent normalized Gaussian.
absl::StatusOr<DirectionFrame> SampleFrame(int64_t d, int64_t K,
                                           FrameMode mode,
                                           std::mt19937_64& rng);

Eigen::VectorXd StandardNormalVector(int64_t size, std::mt19937_64& rng);

}  // namespace zodp

#endif  // ZODP_FRAMES_H_

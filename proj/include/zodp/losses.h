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

// Per-sample losses over a stored dataset.

#ifndef ZODP_LOSSES_H_
#define ZODP_LOSSES_H_

#include <cstdint>
#include <memory>
#include <string_view>

#include "Eigen/Dense"
#include "absl/status/statusor.h"

namespace zodp {

enum class LossKind { kQuadratic, kLogistic };

std::string_view LossKindName(LossKind kind);
absl::StatusOr<LossKind> ParseLossKind(std::string_view name);

struct LossConstants {
  double M = 0.0;          // Smoothness.
  double m = 0.0;          // Strong convexity.
  double lipschitz = 0.0;  // Per-sample Lipschitz constant on B_R.
};

// Samples are the columns of a dim x n matrix.
class LossOracle {
 public:
  virtual ~LossOracle() = default;

  virtual LossKind kind() const = 0;
  int64_t n() const { return X_.cols(); }
  int64_t dim() const { return X_.rows(); }
  const Eigen::MatrixXd& data() const { return X_; }

  virtual double SampleValue(const Eigen::VectorXd& w, int64_t i) const = 0;
  virtual Eigen::VectorXd SampleGradient(const Eigen::VectorXd& w,
                                         int64_t i) const = 0;
  virtual LossConstants Declared(double R) const = 0;
  // Same loss on the dataset with sample i replaced by x.
  virtual std::unique_ptr<LossOracle> WithReplacement(
      int64_t i, const Eigen::VectorXd& x) const = 0;

  double Value(const Eigen::VectorXd& w) const;
  Eigen::VectorXd Gradient(const Eigen::VectorXd& w) const;

 protected:
  explicit LossOracle(Eigen::MatrixXd X) : X_(std::move(X)) {}

  double MaxSampleNorm() const;

  Eigen::MatrixXd X_;
};

// (m/2)|w|^2 + ((M - m)/2) <p, w>^2 + <x_i, w> with p = 1/sqrt(dim).
class QuadraticLoss : public LossOracle {
 public:
  QuadraticLoss(double M, double m, Eigen::MatrixXd X);

  LossKind kind() const override { return LossKind::kQuadratic; }
  double SampleValue(const Eigen::VectorXd& w, int64_t i) const override;
  Eigen::VectorXd SampleGradient(const Eigen::VectorXd& w,
                                 int64_t i) const override;
  LossConstants Declared(double R) const override;
  std::unique_ptr<LossOracle> WithReplacement(
      int64_t i, const Eigen::VectorXd& x) const override;

  // Unconstrained minimizer of the empirical loss; needs m > 0.
  Eigen::VectorXd Minimizer() const;

 private:
  double M_;
  double m_;
  Eigen::VectorXd p_;
};

// log(1 + exp(-<x_i, w>)) + (lambda/2)|w|^2. Labels are folded into x_i.
class LogisticLoss : public LossOracle {
 public:
  LogisticLoss(double lambda, Eigen::MatrixXd X);

  LossKind kind() const override { return LossKind::kLogistic; }
  double SampleValue(const Eigen::VectorXd& w, int64_t i) const override;
  Eigen::VectorXd SampleGradient(const Eigen::VectorXd& w,
                                 int64_t i) const override;
  LossConstants Declared(double R) const override;
  std::unique_ptr<LossOracle> WithReplacement(
      int64_t i, const Eigen::VectorXd& x) const override;

 private:
  double lambda_;
};

// Columns are standard normal draws rescaled to norm feature_norm.
Eigen::MatrixXd MakeDataset(int64_t dim, int64_t n, double feature_norm,
                            uint64_t seed);

// Quadratic uses (M, m) as given; logistic uses m as the ridge weight.
absl::StatusOr<std::unique_ptr<LossOracle>> MakeLoss(LossKind kind, double M,
                                                     double m,
                                                     Eigen::MatrixXd X);

}  // namespace zodp

#endif  // ZODP_LOSSES_H_

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

#include "zodp/losses.h"

#include <cmath>
#include <string>

#include "absl/strings/str_cat.h"
#include "zodp/frames.h"
#include "zodp/rng.h"
#include "zodp/status.h"

namespace zodp {
namespace {

double Softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

std::string_view LossKindName(LossKind kind) {
  return kind == LossKind::kQuadratic ? "quadratic" : "logistic";
}

absl::StatusOr<LossKind> ParseLossKind(std::string_view name) {
  if (name == "quadratic") return LossKind::kQuadratic;
  if (name == "logistic") return LossKind::kLogistic;
  return MakeError(ErrorKind::kConfigError,
                   absl::StrCat("unknown loss '", std::string(name), "'"));
}

double LossOracle::Value(const Eigen::VectorXd& w) const {
  double sum = 0.0;
  for (int64_t i = 0; i < n(); ++i) sum += SampleValue(w, i);
  return sum / static_cast<double>(n());
}

Eigen::VectorXd LossOracle::Gradient(const Eigen::VectorXd& w) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
  for (int64_t i = 0; i < n(); ++i) g += SampleGradient(w, i);
  return g / static_cast<double>(n());
}

double LossOracle::MaxSampleNorm() const {
  return X_.cols() == 0 ? 0.0 : X_.colwise().norm().maxCoeff();
}

QuadraticLoss::QuadraticLoss(double M, double m, Eigen::MatrixXd X)
    : LossOracle(std::move(X)), M_(M), m_(m) {
  p_ = Eigen::VectorXd::Constant(dim(), 1.0 / std::sqrt(static_cast<double>(dim())));
}

double QuadraticLoss::SampleValue(const Eigen::VectorXd& w, int64_t i) const {
  const double pw = p_.dot(w);
  return 0.5 * m_ * w.squaredNorm() + 0.5 * (M_ - m_) * pw * pw +
         X_.col(i).dot(w);
}

Eigen::VectorXd QuadraticLoss::SampleGradient(const Eigen::VectorXd& w,
                                              int64_t i) const {
  return m_ * w + (M_ - m_) * p_.dot(w) * p_ + X_.col(i);
}

LossConstants QuadraticLoss::Declared(double R) const {
  return {M_, m_, M_ * R + MaxSampleNorm()};
}

std::unique_ptr<LossOracle> QuadraticLoss::WithReplacement(
    int64_t i, const Eigen::VectorXd& x) const {
  Eigen::MatrixXd X = X_;
  X.col(i) = x;
  return std::make_unique<QuadraticLoss>(M_, m_, std::move(X));
}

Eigen::VectorXd QuadraticLoss::Minimizer() const {
  // (m I + (M - m) p p^T)^{-1} = (I - ((M - m)/M) p p^T) / m.
  const Eigen::VectorXd mean = X_.rowwise().mean();
  return -(mean - ((M_ - m_) / M_) * p_.dot(mean) * p_) / m_;
}

LogisticLoss::LogisticLoss(double lambda, Eigen::MatrixXd X)
    : LossOracle(std::move(X)), lambda_(lambda) {}

double LogisticLoss::SampleValue(const Eigen::VectorXd& w, int64_t i) const {
  return Softplus(-X_.col(i).dot(w)) + 0.5 * lambda_ * w.squaredNorm();
}

Eigen::VectorXd LogisticLoss::SampleGradient(const Eigen::VectorXd& w,
                                             int64_t i) const {
  const double s = X_.col(i).dot(w);
  return -X_.col(i) / (1.0 + std::exp(s)) + lambda_ * w;
}

LossConstants LogisticLoss::Declared(double R) const {
  const double norm = MaxSampleNorm();
  return {0.25 * norm * norm + lambda_, lambda_, norm + lambda_ * R};
}

std::unique_ptr<LossOracle> LogisticLoss::WithReplacement(
    int64_t i, const Eigen::VectorXd& x) const {
  Eigen::MatrixXd X = X_;
  X.col(i) = x;
  return std::make_unique<LogisticLoss>(lambda_, std::move(X));
}

Eigen::MatrixXd MakeDataset(int64_t dim, int64_t n, double feature_norm,
                            uint64_t seed) {
  Eigen::MatrixXd X(dim, n);
  for (int64_t i = 0; i < n; ++i) {
    std::mt19937_64 rng = MakeStream(seed, 0, i, Purpose::kDataset);
    Eigen::VectorXd x = StandardNormalVector(dim, rng);
    X.col(i) = x * (feature_norm / x.norm());
  }
  return X;
}

absl::StatusOr<std::unique_ptr<LossOracle>> MakeLoss(LossKind kind, double M,
                                                     double m,
                                                     Eigen::MatrixXd X) {
  if (X.cols() < 1 || X.rows() < 1) {
    return MakeError(ErrorKind::kInvalidParams, "dataset is empty");
  }
  if (kind == LossKind::kQuadratic) {
    if (!(M > 0.0 && m >= 0.0 && m <= M)) {
      return MakeError(ErrorKind::kInvalidParams,
                       "quadratic loss needs 0 <= m <= M and M > 0");
    }
    return std::unique_ptr<LossOracle>(
        std::make_unique<QuadraticLoss>(M, m, std::move(X)));
  }
  if (!(m >= 0.0)) {
    return MakeError(ErrorKind::kInvalidParams, "logistic ridge weight must be >= 0");
  }
  return std::unique_ptr<LossOracle>(
      std::make_unique<LogisticLoss>(m, std::move(X)));
}

}  // namespace zodp

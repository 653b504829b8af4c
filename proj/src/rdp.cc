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

#include "zodp/rdp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "boost/math/quadrature/gauss_kronrod.hpp"
#include "zodp/status.h"

namespace zodp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxSeriesOrder = 100000;
constexpr double kQuadratureRelTol = 1e-10;

absl::Status Invalid(std::string_view message) {
  return MakeError(ErrorKind::kInvalidParams, message);
}

bool ValidAlpha(double alpha) { return std::isfinite(alpha) && alpha > 1.0; }

// log(exp(x) - 1) for x > 0.
double LogExpm1(double x) {
  return x > 50.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

// log(1 + exp(x)).
double Log1pExp(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double LogAddExp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log((1 + z)^alpha - 1 - alpha z) for z > -1; the value is >= 0 by
// convexity, so no cancellation is left for the integral to absorb.
double LogBinomialRemainder(double alpha, double z) {
  if (z == 0.0) return -kInf;
  if (std::abs(z) < 1e-2) {
    // Generalized binomial series from the quadratic term on.
    double coeff = alpha * (alpha - 1.0) / 2.0;
    double power = z * z;
    double sum = coeff * power;
    for (int j = 3; j < 40; ++j) {
      coeff *= (alpha - (j - 1)) / j;
      power *= z;
      const double term = coeff * power;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return std::log(sum);
  }
  const double log_pow = alpha * std::log1p(z);
  if (log_pow > 30.0) {
    return log_pow + std::log1p(-(1.0 + alpha * z) * std::exp(-log_pow));
  }
  return std::log(std::expm1(log_pow) - alpha * z);
}

// log(A - 1) -> S = log(A) / (alpha - 1).
double SgmFromLogExcess(double log_excess, double alpha) {
  if (log_excess == -kInf) return 0.0;
  return Log1pExp(log_excess) / (alpha - 1.0);
}

absl::Status CheckSgmArgs(double alpha, double q, double sigma) {
  if (!ValidAlpha(alpha)) return Invalid("alpha must be > 1");
  if (!(q > 0.0 && q <= 1.0)) return Invalid("q must lie in (0, 1]");
  if (!(std::isfinite(sigma) && sigma > 0.0)) {
    return Invalid("sigma must be positive");
  }
  return absl::OkStatus();
}

}  // namespace

std::vector<double> DefaultAlphaGrid() {
  std::vector<double> grid;
  constexpr int kFractional = 60;
  const double lo = 1.01;
  const double ratio = std::pow(2.0 / lo, 1.0 / kFractional);
  double a = lo;
  for (int i = 0; i < kFractional; ++i) {
    grid.push_back(a);
    a *= ratio;
  }
  for (int k = 2; k <= 256; ++k) grid.push_back(k);
  return grid;
}

absl::StatusOr<RdpCurve> RdpCurve::Create(std::vector<double> alphas,
                                          std::vector<double> rhos) {
  if (alphas.size() != rhos.size()) {
    return Invalid("alphas and rhos differ in length");
  }
  for (size_t i = 0; i < alphas.size(); ++i) {
    if (!ValidAlpha(alphas[i])) return Invalid("every alpha must be > 1");
    if (i > 0 && !(alphas[i] > alphas[i - 1])) {
      return Invalid("alphas must be strictly increasing");
    }
    if (std::isnan(rhos[i]) || rhos[i] < 0.0) {
      return Invalid("rho must be non-negative");
    }
  }
  return RdpCurve(std::move(alphas), std::move(rhos));
}

RdpCurve RdpCurve::Zero(const std::vector<double>& alphas) {
  return RdpCurve(alphas, std::vector<double>(alphas.size(), 0.0));
}

absl::StatusOr<double> RdpCurve::At(double alpha) const {
  auto it = std::lower_bound(alphas_.begin(), alphas_.end(), alpha);
  if (it == alphas_.end() || *it != alpha) {
    return absl::NotFoundError(absl::StrCat("alpha ", alpha, " not on grid"));
  }
  return rhos_[it - alphas_.begin()];
}

absl::StatusOr<double> GaussianRdp(double alpha, double sensitivity,
                                   double noise_std) {
  if (!ValidAlpha(alpha)) return Invalid("alpha must be > 1");
  if (!(std::isfinite(sensitivity) && sensitivity >= 0.0)) {
    return Invalid("sensitivity must be non-negative");
  }
  if (!(std::isfinite(noise_std) && noise_std > 0.0)) {
    return Invalid("noise_std must be positive");
  }
  return alpha * sensitivity * sensitivity / (2.0 * noise_std * noise_std);
}

absl::StatusOr<double> SgmRdpSeries(int alpha, double q, double sigma) {
  ZODP_RETURN_IF_ERROR(CheckSgmArgs(alpha, q, sigma));
  if (alpha > kMaxSeriesOrder) return Invalid("alpha too large for series");
  if (q == 1.0) return alpha / (2.0 * sigma * sigma);
  // A - 1 = sum_{k>=2} C(alpha,k) (1-q)^(alpha-k) q^k (exp((k^2-k)/(2 s^2)) - 1);
  // the k = 0, 1 terms vanish and every remaining term is positive.
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const double lgamma_a1 = std::lgamma(alpha + 1.0);
  double log_excess = -kInf;
  for (int k = 2; k <= alpha; ++k) {
    const double log_binom =
        lgamma_a1 - std::lgamma(k + 1.0) - std::lgamma(alpha - k + 1.0);
    const double kk = static_cast<double>(k);
    const double term = log_binom + (alpha - k) * log_1mq + kk * log_q +
                        LogExpm1((kk * kk - kk) / (2.0 * sigma * sigma));
    log_excess = LogAddExp(log_excess, term);
  }
  return SgmFromLogExcess(log_excess, alpha);
}

absl::StatusOr<double> SgmRdpQuadrature(double alpha, double q, double sigma) {
  ZODP_RETURN_IF_ERROR(CheckSgmArgs(alpha, q, sigma));
  if (q == 1.0) return alpha / (2.0 * sigma * sigma);
  // A - 1 = E_{x ~ N(0, s^2)}[(1 + z)^alpha - 1 - alpha z] with
  // z = q (exp((2x - 1) / (2 s^2)) - 1); E[z] = 0 so the linear term is free.
  const double s2 = sigma * sigma;
  const double log_norm = -0.5 * std::log(2.0 * M_PI * s2);
  const double log_q = std::log(q);
  // Height of the upper mode; carried separately so that the shape near that
  // mode is not rounded against a huge constant.
  const double offset = alpha * (alpha - 1.0) / (2.0 * s2);
  // Evaluated at x = center + sigma t so that x - alpha carries no rounding
  // from the center.
  auto log_integrand = [&](double center, double t) {
    const double x = center + sigma * t;
    const double u = (2.0 * x - 1.0) / (2.0 * s2);
    double z = q * std::expm1(u);
    if (u > 0.0) {
      const double log_z = log_q + LogExpm1(u);
      if (log_z > 30.0) {
        // Past this point -x^2/(2 s^2) and alpha u are both huge; their sum
        // is offset - (x - alpha)^2 / (2 s^2).
        const double log_pow = alpha * (log_z + std::log1p(std::exp(-log_z)));
        const double rest =
            std::exp(-log_pow) + std::exp(std::log(alpha) + log_z - log_pow);
        const double dx = (center - alpha) + sigma * t;
        return -dx * dx / (2.0 * s2) +
               alpha * (log_q + std::log1p(-std::exp(-u)) +
                        std::log1p(std::exp(-log_z))) +
               std::log1p(-rest);
      }
      z = std::exp(log_z);
    }
    return (-x * x / (2.0 * s2) - offset) + LogBinomialRemainder(alpha, z);
  };

  // The integrand has one mode near 0 and one near alpha, each of width
  // sigma, with a single dip in between. Windows around both modes are
  // widened until their edges sit far below the peak, which bounds whatever
  // lies between or beyond them. Each window is {center, t_lo, t_hi}.
  struct Window {
    double center, lo, hi;
  };
  std::vector<Window> windows;
  double log_peak = -kInf;
  double reach = 14.0;
  for (int attempt = 0;; ++attempt) {
    windows.clear();
    if (reach * sigma >= 0.5 * alpha) {
      windows.push_back({0.0, -reach, alpha / sigma + reach});
    } else {
      windows.push_back({0.0, -reach, reach});
      windows.push_back({alpha, -reach, reach});
    }
    log_peak = -kInf;
    for (const Window& w : windows) {
      const int points =
          static_cast<int>(std::min(2e6, std::ceil((w.hi - w.lo) * 8.0))) + 1;
      for (int i = 0; i < points; ++i) {
        log_peak = std::max(
            log_peak, log_integrand(w.center, w.lo + (w.hi - w.lo) * i / (points - 1)));
      }
    }
    if (log_peak == -kInf) return 0.0;
    double edge = -kInf;
    for (const Window& w : windows) {
      edge = std::max({edge, log_integrand(w.center, w.lo),
                       log_integrand(w.center, w.hi)});
    }
    if (edge < log_peak - 60.0) break;
    if (attempt == 8) {
      return MakeError(ErrorKind::kQuadratureNonConvergence,
                       absl::StrCat("alpha=", alpha, " q=", q, " sigma=", sigma,
                                    ": integrand does not decay"));
    }
    reach *= 2.0;
  }

  double total = 0.0;
  double total_error = 0.0;
  for (const Window& w : windows) {
    auto scaled = [&](double t) {
      return std::exp(log_integrand(w.center, t) - log_peak);
    };
    const int segments =
        std::clamp(static_cast<int>(std::ceil((w.hi - w.lo) * 2.0)), 1, 100000);
    for (int s = 0; s < segments; ++s) {
      const double a = w.lo + (w.hi - w.lo) * s / segments;
      const double b = w.lo + (w.hi - w.lo) * (s + 1) / segments;
      double error = 0.0;
      const double value =
          boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
              scaled, a, b, 15, 0.1 * kQuadratureRelTol, &error);
      total += value;
      total_error += error;
    }
  }
  if (!(total > 0.0) || !std::isfinite(total) ||
      total_error > kQuadratureRelTol * total) {
    return MakeError(
        ErrorKind::kQuadratureNonConvergence,
        absl::StrCat("alpha=", alpha, " q=", q, " sigma=", sigma,
                     " integral=", total, " error=", total_error));
  }
  // dx = sigma dt.
  return SgmFromLogExcess(
      log_norm + offset + log_peak + std::log(sigma * total), alpha);
}

absl::StatusOr<double> SgmRdp(double alpha, double q, double sigma) {
  ZODP_RETURN_IF_ERROR(CheckSgmArgs(alpha, q, sigma));
  if (q == 1.0) return alpha / (2.0 * sigma * sigma);
  if (alpha == std::floor(alpha) && alpha <= kMaxSeriesOrder) {
    return SgmRdpSeries(static_cast<int>(alpha), q, sigma);
  }
  return SgmRdpQuadrature(alpha, q, sigma);
}

absl::StatusOr<RdpCurve> Compose(absl::Span<const RdpCurve> curves) {
  if (curves.empty()) return Invalid("Compose needs at least one curve");
  const std::vector<double>& grid = curves.front().alphas();
  for (const RdpCurve& c : curves) {
    if (c.alphas() != grid) {
      return MakeError(ErrorKind::kGridMismatch,
                       "curves do not share an alpha grid");
    }
  }
  std::vector<double> rhos(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    // Neumaier summation keeps the result independent of magnitude mixing.
    double sum = 0.0;
    double comp = 0.0;
    for (const RdpCurve& c : curves) {
      const double x = c.rhos()[i];
      if (std::isinf(x)) {
        sum = kInf;
        comp = 0.0;
        break;
      }
      const double t = sum + x;
      comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    }
    rhos[i] = sum + comp;
  }
  return RdpCurve::Create(grid, std::move(rhos));
}

absl::StatusOr<DpConversion> RdpToDp(const RdpCurve& curve, double delta) {
  if (curve.empty()) return Invalid("RdpToDp needs a non-empty curve");
  if (!(delta > 0.0 && delta < 1.0)) return Invalid("delta must lie in (0, 1)");
  const double log_inv_delta = -std::log(delta);
  DpConversion best{kInf, curve.alphas().front()};
  for (size_t i = 0; i < curve.size(); ++i) {
    const double alpha = curve.alphas()[i];
    const double eps = curve.rhos()[i] + log_inv_delta / (alpha - 1.0);
    if (eps < best.epsilon) best = {eps, alpha};
  }
  return best;
}

}  // namespace zodp

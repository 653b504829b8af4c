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

#include "zodp/verify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "absl/strings/str_cat.h"
#include "zodp/accountant.h"
#include "zodp/concentration.h"
#include "zodp/frames.h"
#include "zodp/losses.h"
#include "zodp/params_json.h"
#include "zodp/rng.h"
#include "zodp/stats.h"
#include "zodp/status.h"
#include "zodp/zogd.h"

namespace zodp {
namespace {

constexpr double kAlmostSureSlack = 1e-9;

absl::Status Invalid(const std::string& message) {
  return MakeError(ErrorKind::kInvalidParams, message);
}

std::mt19937_64 SampleStream(uint64_t seed, int64_t i) {
  return MakeStream(seed, static_cast<uint64_t>(i), 0, Purpose::kVerify);
}

// Max over pairs of |m_i - m_j| / (3 (se_i + se_j)); 0 when the means agree.
double MaxPairRatio(const std::vector<MeanSe>& stats) {
  double worst = 0.0;
  for (size_t i = 0; i < stats.size(); ++i) {
    for (size_t j = i + 1; j < stats.size(); ++j) {
      const double diff = std::abs(stats[i].mean - stats[j].mean);
      if (diff == 0.0) continue;
      const double scale = 3.0 * (stats[i].se + stats[j].se);
      worst = std::max(worst, scale > 0.0 ? diff / scale
                                          : std::numeric_limits<double>::infinity());
    }
  }
  return worst;
}

nlohmann::json MeansJson(const std::vector<double>& betas,
                         const std::vector<MeanSe>& stats) {
  nlohmann::json out = nlohmann::json::array();
  for (size_t i = 0; i < betas.size(); ++i) {
    out.push_back({{"beta", betas[i]}, {"mean", stats[i].mean}, {"se", stats[i].se}});
  }
  return out;
}

}  // namespace

nlohmann::json ReportToJson(const VerificationReport& r) {
  return {{"check", r.check},       {"config", r.config},
          {"samples", r.samples},   {"observed", r.observed},
          {"threshold", r.threshold}, {"pass", r.pass},
          {"seed", r.seed},         {"details", r.details}};
}

ProblemParams DefaultWinfParams() {
  ProblemParams p;
  p.d = 10;
  p.n = 10;
  p.K = 2;
  p.eta = 0.5;
  p.sigma = 1.0;
  p.Delta = 1.0;
  p.R = 5.0;
  p.M = 1.0;
  p.m = 0.5;
  p.xi = 1e-3;
  p.convexity = Convexity::kStronglyConvex;
  return p;
}

ProblemParams DefaultUtilityParams() {
  ProblemParams p;
  p.d = 20;
  p.n = 20;
  p.K = 4;
  p.eta = 1.0;
  p.sigma = 3.0;
  p.Delta = 1e6;
  p.R = 1e6;
  p.M = 1.0;
  p.m = 0.5;
  p.xi = 0.0;
  p.convexity = Convexity::kStronglyConvex;
  return p;
}

std::string CheckName(const CheckSpec& spec) {
  struct Visitor {
    std::string operator()(const BetaIdentityConfig&) { return "beta_identity"; }
    std::string operator()(const LipschitzTailConfig&) { return "lipschitz_tail"; }
    std::string operator()(const WinfConfig&) { return "winf"; }
    std::string operator()(const UtilityConfig&) { return "beta_utility_equivalence"; }
    std::string operator()(const IidVsOrthonormalConfig&) { return "iid_vs_orthonormal"; }
  };
  return std::visit(Visitor{}, spec);
}

absl::StatusOr<VerificationReport> CheckBetaIdentity(
    const BetaIdentityConfig& config, uint64_t seed) {
  const int64_t d = config.d;
  const int64_t K = config.K;
  if (K < 1 || K > d) return Invalid("beta_identity needs 1 <= K <= d");
  if (config.samples < 2) return Invalid("beta_identity needs >= 2 samples");

  VerificationReport report;
  report.check = "beta_identity";
  report.config = {{"d", d}, {"K", K}, {"samples", config.samples}};
  report.samples = config.samples;
  report.seed = seed;

  std::mt19937_64 arng = MakeStream(seed, 0, 1, Purpose::kVerify);
  const Eigen::VectorXd A = StandardNormalVector(d, arng).normalized();
  std::vector<double> proj(config.samples);
  std::vector<double> ref(config.samples);
  for (int64_t i = 0; i < config.samples; ++i) {
    std::mt19937_64 rng = SampleStream(seed, i);
    ZODP_ASSIGN_OR_RETURN(DirectionFrame frame,
                          SampleFrame(d, K, FrameMode::kStiefel, rng));
    proj[i] = (frame.U.transpose() * A).squaredNorm();
    if (K < d) ref[i] = SampleBeta(0.5 * K, 0.5 * (d - K), rng);
  }
  const MeanSe stats = MeanAndSe(proj);
  const double expected = static_cast<double>(K) / static_cast<double>(d);
  report.details["mean"] = stats.mean;
  report.details["se"] = stats.se;
  report.details["expected_mean"] = expected;
  if (K == d) {
    // Complete frame: the projection keeps the whole vector.
    double worst = 0.0;
    for (double v : proj) worst = std::max(worst, std::abs(v - 1.0));
    report.observed = worst;
    report.threshold = 1e-10;
    report.pass = worst <= report.threshold;
    return report;
  }
  const KsResult ks = KsTwoSample(proj, ref);
  const double mean_error = std::abs(stats.mean - expected);
  const double mean_tol = std::max(3.0 * stats.se, 1e-12);
  report.details["ks_statistic"] = ks.statistic;
  report.details["mean_error"] = mean_error;
  report.details["mean_tolerance"] = mean_tol;
  report.observed = ks.p_value;
  report.threshold = 0.01;
  report.pass = ks.p_value > 0.01 && mean_error <= mean_tol;
  return report;
}

absl::StatusOr<VerificationReport> CheckLipschitzTail(
    const LipschitzTailConfig& config, uint64_t seed) {
  const int64_t d = config.d;
  const int64_t K = config.K;
  if (K < 1 || d < 2 * K) return Invalid("lipschitz_tail needs d >= 2K >= 2");
  if (!(config.c >= 0.0)) return Invalid("lipschitz_tail needs c >= 0");
  if (!(std::abs(config.cos_ab) <= 1.0)) return Invalid("cos_ab must lie in [-1, 1]");
  if (config.samples < 1) return Invalid("lipschitz_tail needs samples >= 1");
  double theta = 0.0;
  if (config.theta.has_value()) {
    theta = *config.theta;
  } else if (config.c < 1.0) {
    ZODP_ASSIGN_OR_RETURN(theta, ThetaStar(config.c));
  }
  ZODP_ASSIGN_OR_RETURN(double cbar1, CBar1(config.c, K, d, theta));
  ZODP_ASSIGN_OR_RETURN(double bound, DeltaF({K, d, theta, 1}));

  VerificationReport report;
  report.check = "lipschitz_tail";
  report.config = {{"d", d}, {"K", K}, {"c", config.c}, {"theta", theta},
                   {"cos_ab", config.cos_ab}, {"samples", config.samples}};
  report.samples = config.samples;
  report.seed = seed;

  // Fix the frame to the first K coordinates and draw a uniform orthonormal
  // pair (A, E) instead. Only the K-dim heads and the 2x2 Gram matrix of the
  // (d-K)-dim tails matter; the latter is Wishart_2(d-K), drawn by Bartlett.
  const double c2 = config.c * config.c;
  const double rho = config.cos_ab;
  const double rho_perp = std::sqrt(1.0 - rho * rho);
  std::chi_squared_distribution<double> chi_a(static_cast<double>(d - K));
  std::chi_squared_distribution<double> chi_b(static_cast<double>(d - K - 1));
  int64_t exceed = 0;
  double max_coef = 0.0;
  for (int64_t i = 0; i < config.samples; ++i) {
    std::mt19937_64 rng = SampleStream(seed, i);
    const Eigen::VectorXd h1 = StandardNormalVector(K, rng);
    const Eigen::VectorXd h2 = StandardNormalVector(K, rng);
    std::normal_distribution<double> normal;
    const double l11 = std::sqrt(chi_a(rng));
    const double l21 = normal(rng);
    const double l22 = std::sqrt(chi_b(rng));
    const double t11 = l11 * l11;
    const double t12 = l11 * l21;
    const double t22 = l21 * l21 + l22 * l22;

    const double aa = h1.squaredNorm() + t11;
    const double ab = h1.dot(h2) + t12;
    const double bb = h2.squaredNorm() + t22;
    const double coef = ab / aa;
    const double ee = bb - ab * coef;
    const Eigen::VectorXd head_a = h1 / std::sqrt(aa);
    const Eigen::VectorXd head_e = (h2 - coef * h1) / std::sqrt(ee);
    const double upsilon = head_a.squaredNorm();
    const double gamma = (rho * head_a + rho_perp * head_e).squaredNorm();
    const double realized = std::sqrt(std::max(0.0, 1.0 - upsilon + c2 * gamma));
    max_coef = std::max(max_coef, realized);
    if (realized > cbar1) ++exceed;
  }
  const double n = static_cast<double>(config.samples);
  const double rate = static_cast<double>(exceed) / n;
  const double se = std::sqrt(rate * (1.0 - rate) / n);
  report.observed = rate;
  report.threshold = bound + 3.0 * se;
  report.pass = rate <= report.threshold;
  report.details = {{"cbar1", cbar1}, {"bound", bound}, {"se", se},
                    {"exceedances", exceed}, {"max_realized", max_coef}};
  return report;
}

absl::StatusOr<VerificationReport> CheckWinf(const WinfConfig& config,
                                             uint64_t seed) {
  const ProblemParams& p = config.params;
  ZODP_RETURN_IF_ERROR(ValidateParams(p));
  if (config.trials < 1 || config.T < 1) return Invalid("winf needs trials, T >= 1");
  ZODP_ASSIGN_OR_RETURN(
      std::unique_ptr<LossOracle> loss,
      MakeLoss(LossKind::kQuadratic, p.M, p.m,
               MakeDataset(p.d, p.n, config.feature_norm, seed)));

  VerificationReport report;
  report.check = "winf";
  report.config = {{"problem", ProblemParamsToJson(p)},
                   {"trials", config.trials},
                   {"T", config.T},
                   {"beta", config.beta},
                   {"feature_norm", config.feature_norm}};
  report.samples = config.trials;
  report.seed = seed;

  const double step_bound = 2.0 * p.eta * p.Delta / std::sqrt(static_cast<double>(p.K));
  double max_excess = -std::numeric_limits<double>::infinity();
  double max_first_step = 0.0;
  double max_distance = 0.0;
  int64_t violations = 0;
  for (int64_t trial = 0; trial < config.trials; ++trial) {
    const int64_t index = trial % p.n;
    RunOptions options;
    options.T = config.T;
    options.beta = {config.beta};
    options.seed = StreamSeed(seed, trial, 0, Purpose::kVerify);
    ZODP_ASSIGN_OR_RETURN(
        auto pair, RunAdjacentPair(p, *loss, index, -loss->data().col(index), options));
    for (int64_t t = 0; t <= config.T; ++t) {
      const double dist = (pair.first.w[t] - pair.second.w[t]).norm();
      const double excess = dist - WinfBound(t, p);
      max_distance = std::max(max_distance, dist);
      max_excess = std::max(max_excess, excess);
      if (excess > kAlmostSureSlack) ++violations;
      if (t == 1) max_first_step = std::max(max_first_step, dist);
    }
  }
  const double first_step_excess = max_first_step - step_bound;
  report.observed = max_excess;
  report.threshold = kAlmostSureSlack;
  report.pass = violations == 0 && first_step_excess <= kAlmostSureSlack;
  report.details = {{"violations", violations},
                    {"max_distance", max_distance},
                    {"first_step_max_distance", max_first_step},
                    {"first_step_bound", step_bound}};
  return report;
}

absl::StatusOr<VerificationReport> CheckBetaUtilityEquivalence(
    const UtilityConfig& config, uint64_t seed) {
  const ProblemParams& p = config.params;
  ZODP_RETURN_IF_ERROR(ValidateParams(p));
  if (p.convexity != Convexity::kStronglyConvex) {
    return Invalid("beta_utility_equivalence needs a strongly convex loss");
  }
  if (config.betas.empty()) return Invalid("beta list is empty");
  if (config.trials < 2 || config.T < 1) {
    return Invalid("beta_utility_equivalence needs trials >= 2 and T >= 1");
  }
  ZODP_ASSIGN_OR_RETURN(
      std::unique_ptr<LossOracle> loss,
      MakeLoss(LossKind::kQuadratic, p.M, p.m,
               MakeDataset(p.d, p.n, config.feature_norm, seed)));

  VerificationReport report;
  report.check = "beta_utility_equivalence";
  report.config = {{"problem", ProblemParamsToJson(p)},
                   {"betas", config.betas},
                   {"trials", config.trials},
                   {"T", config.T},
                   {"feature_norm", config.feature_norm},
                   {"test_hook_mis_scale_noise", config.test_hook_mis_scale_noise}};
  report.samples = config.trials;
  report.seed = seed;

  std::vector<MeanSe> loss_stats;
  std::vector<MeanSe> noise_stats;
  for (double beta : config.betas) {
    std::vector<double> final_loss(config.trials);
    std::vector<double> noise_energy(config.trials);
    for (int64_t trial = 0; trial < config.trials; ++trial) {
      RunOptions options;
      options.T = config.T;
      options.beta = {beta};
      options.seed = StreamSeed(seed, trial, 0, Purpose::kVerify);
      options.record_draws = true;
      options.mis_scale_noise = config.test_hook_mis_scale_noise;
      ZODP_ASSIGN_OR_RETURN(Trajectory traj, Run(p, *loss, options));
      final_loss[trial] = loss->Value(traj.w.back());
      const DirectionFrame frame{traj.frames[0], FrameMode::kStiefel};
      noise_energy[trial] = InjectedNoise(frame, traj.noise[0], p, beta,
                                          config.test_hook_mis_scale_noise)
                                .squaredNorm();
    }
    loss_stats.push_back(MeanAndSe(final_loss));
    noise_stats.push_back(MeanAndSe(noise_energy));
  }
  const double loss_ratio = MaxPairRatio(loss_stats);
  const double noise_ratio = MaxPairRatio(noise_stats);
  report.observed = std::max(loss_ratio, noise_ratio);
  report.threshold = 1.0;
  report.pass = report.observed <= report.threshold;
  report.details = {{"final_loss", MeansJson(config.betas, loss_stats)},
                    {"noise_second_moment", MeansJson(config.betas, noise_stats)},
                    {"expected_noise_second_moment", p.eta * p.eta * p.sigma * p.sigma},
                    {"loss_ratio", loss_ratio},
                    {"noise_ratio", noise_ratio}};
  return report;
}

absl::StatusOr<VerificationReport> CheckIidVsOrthonormal(
    const IidVsOrthonormalConfig& config, uint64_t seed) {
  const int64_t d = config.d;
  const int64_t K = config.K;
  if (K < 1 || d < 2 * K) return Invalid("iid_vs_orthonormal needs d >= 2K >= 2");
  if (!(config.c >= 0.0)) return Invalid("iid_vs_orthonormal needs c >= 0");
  if (config.samples < 1) return Invalid("iid_vs_orthonormal needs samples >= 1");

  VerificationReport report;
  report.check = "iid_vs_orthonormal";
  report.config = {{"d", d}, {"K", K}, {"c", config.c}, {"samples", config.samples}};
  report.samples = config.samples;
  report.seed = seed;

  // A = e_1 by rotation invariance. Direction k is g_k / |g_k| with first
  // coordinate r_k; the Gram matrix of the (d-1)-dim tails is Wishart_K(d-1),
  // drawn as L L^T with Bartlett's L. Both modes read r and then the first
  // chi-square from the same stream, so K = 1 gives identical samples.
  const double shrink = 1.0 - config.c;
  const double one_minus_c2 = 1.0 - config.c * config.c;
  std::vector<double> orth(config.samples);
  std::vector<double> iid(config.samples);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(K, K);
  for (int64_t i = 0; i < config.samples; ++i) {
    {
      std::mt19937_64 rng = SampleStream(seed, i);
      const Eigen::VectorXd r = StandardNormalVector(K, rng);
      std::chi_squared_distribution<double> chi(static_cast<double>(d - K));
      const double rr = r.squaredNorm();
      const double upsilon = rr / (rr + chi(rng));
      orth[i] = std::sqrt(std::max(0.0, 1.0 - one_minus_c2 * upsilon));
    }
    {
      std::mt19937_64 rng = SampleStream(seed, i);
      const Eigen::VectorXd r = StandardNormalVector(K, rng);
      for (int64_t k = 0; k < K; ++k) {
        std::chi_squared_distribution<double> chi(static_cast<double>(d - 1 - k));
        L(k, k) = std::sqrt(chi(rng));
      }
      std::normal_distribution<double> normal;
      for (int64_t k = 1; k < K; ++k) {
        for (int64_t l = 0; l < k; ++l) L(k, l) = normal(rng);
      }
      Eigen::VectorXd norm(K);
      for (int64_t k = 0; k < K; ++k) {
        norm[k] = std::sqrt(r[k] * r[k] + L.row(k).head(k + 1).squaredNorm());
      }
      const Eigen::VectorXd a = r.cwiseQuotient(norm);
      const Eigen::VectorXd v = a.cwiseQuotient(norm);
      const double rv = r.dot(v);
      const double quad = rv * rv + (L.transpose() * v).squaredNorm();
      const double value =
          1.0 - 2.0 * shrink * a.squaredNorm() + shrink * shrink * quad;
      iid[i] = std::sqrt(std::max(0.0, value));
    }
  }
  std::sort(orth.begin(), orth.end());
  std::sort(iid.begin(), iid.end());
  const double lo = std::min(orth.front(), iid.front());
  const double hi = std::max(orth.back(), iid.back());
  nlohmann::json grid = nlohmann::json::array();
  nlohmann::json ecdf_orth = nlohmann::json::array();
  nlohmann::json ecdf_iid = nlohmann::json::array();
  for (int j = 1; j <= 99; ++j) {
    const double x = lo + (hi - lo) * j / 100.0;
    grid.push_back(x);
    ecdf_orth.push_back(EmpiricalCdf(orth, x));
    ecdf_iid.push_back(EmpiricalCdf(iid, x));
  }
  auto quantiles = [](const std::vector<double>& v) {
    return nlohmann::json{{"q50", Quantile(v, 0.5)},
                          {"q90", Quantile(v, 0.9)},
                          {"q99", Quantile(v, 0.99)}};
  };
  report.observed = Quantile(orth, 0.99);
  report.threshold = Quantile(iid, 0.99);
  report.pass = report.observed <= report.threshold;
  report.details = {{"orthonormal", quantiles(orth)},
                    {"iid", quantiles(iid)},
                    {"ecdf_grid", grid},
                    {"ecdf_orthonormal", ecdf_orth},
                    {"ecdf_iid", ecdf_iid},
                    {"comparison", "qualitative"}};
  return report;
}

absl::StatusOr<VerificationReport> RunCheck(const CheckSpec& spec,
                                            uint64_t seed) {
  struct Visitor {
    uint64_t seed;
    absl::StatusOr<VerificationReport> operator()(const BetaIdentityConfig& c) {
      return CheckBetaIdentity(c, seed);
    }
    absl::StatusOr<VerificationReport> operator()(const LipschitzTailConfig& c) {
      return CheckLipschitzTail(c, seed);
    }
    absl::StatusOr<VerificationReport> operator()(const WinfConfig& c) {
      return CheckWinf(c, seed);
    }
    absl::StatusOr<VerificationReport> operator()(const UtilityConfig& c) {
      return CheckBetaUtilityEquivalence(c, seed);
    }
    absl::StatusOr<VerificationReport> operator()(const IidVsOrthonormalConfig& c) {
      return CheckIidVsOrthonormal(c, seed);
    }
  };
  return std::visit(Visitor{seed}, spec);
}

std::vector<CheckRequest> DefaultSuite() {
  std::vector<CheckRequest> suite;
  suite.push_back({BetaIdentityConfig{100, 1, 100000}, std::nullopt});
  suite.push_back({BetaIdentityConfig{50, 10, 100000}, std::nullopt});
  suite.push_back({BetaIdentityConfig{2, 2, 1000}, std::nullopt});
  suite.push_back({LipschitzTailConfig{}, std::nullopt});
  LipschitzTailConfig vacuous;
  vacuous.c = 1.0;
  vacuous.theta = 0.0;
  vacuous.samples = 10000;
  suite.push_back({vacuous, std::nullopt});
  suite.push_back({WinfConfig{}, std::nullopt});
  suite.push_back({UtilityConfig{}, std::nullopt});
  suite.push_back({IidVsOrthonormalConfig{}, std::nullopt});
  return suite;
}

}  // namespace zodp

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

#include "zodp/accountant.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <thread>
#include <tuple>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "zodp/concentration.h"
#include "zodp/status.h"

namespace zodp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int64_t kExhaustiveTauLimit = 4096;
constexpr int kGeometricTauPoints = 128;
constexpr int kRefinedCandidates = 3;
constexpr double kLogitLo = -25.0;
constexpr double kLogitHi = 25.0;
constexpr int kLogitGridPoints = 101;
constexpr int kGoldenIterations = 64;

absl::Status Invalid(std::string_view message) {
  return MakeError(ErrorKind::kInvalidParams, message);
}

double Sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// log |exp(x) - 1| for x != 0.
double LogAbsExpm1(double x) {
  if (x > 0.0) {
    return x > 50.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
  }
  return std::log(-std::expm1(x));
}

// log sum_{j=1}^{L} exp(j * lr).
double LogGeometricSum(double lr, int64_t L) {
  const double l = static_cast<double>(L);
  if (lr == 0.0) return std::log(l);
  return lr + LogAbsExpm1(l * lr) - LogAbsExpm1(lr);
}

double ConversionEpsilon(const std::vector<double>& alphas,
                         const std::vector<double>& rho, double delta_p,
                         size_t* arg) {
  const double log_inv = -std::log(delta_p);
  double best = kInf;
  *arg = 0;
  for (size_t i = 0; i < alphas.size(); ++i) {
    const double eps = rho[i] + log_inv / (alphas[i] - 1.0);
    if (eps < best) {
      best = eps;
      *arg = i;
    }
  }
  return best;
}

// Per-step directional cost, the first summand of rho.
class StepCost {
 public:
  virtual ~StepCost() = default;
  virtual double Cost(double alpha, double beta) const = 0;
  // True when Cost(alpha, beta) = alpha * Cost(1, beta).
  virtual bool linear_in_alpha() const = 0;
  absl::Status status() const { return status_; }

 protected:
  void Record(const absl::Status& s) const {
    if (status_.ok() && !s.ok()) status_ = s;
  }

 private:
  mutable absl::Status status_;
};

class GaussianStepCost : public StepCost {
 public:
  explicit GaussianStepCost(const ProblemParams& p)
      : s_(2.0 * p.Delta / static_cast<double>(p.n)), sigma_(p.sigma) {}

  double Cost(double alpha, double beta) const override {
    if (beta <= 0.0) return kInf;
    // Same arithmetic as GaussianRdp so the beta = 1 branch is bit-identical
    // to the composition baseline.
    const double noise_std = sigma_ * std::sqrt(beta);
    return alpha * s_ * s_ / (2.0 * noise_std * noise_std);
  }
  bool linear_in_alpha() const override { return true; }

 private:
  double s_;
  double sigma_;
};

// min(K S(q, sqrt(K beta) sigma b / (2 Delta)), S(q, sqrt(beta) sigma b / (2 Delta))).
class SampledStepCost : public StepCost {
 public:
  explicit SampledStepCost(const ProblemParams& p)
      : q_(static_cast<double>(*p.batch) / static_cast<double>(p.n)),
        k_(static_cast<double>(p.K)),
        scale_(p.sigma * static_cast<double>(*p.batch) / (2.0 * p.Delta)) {}

  double Cost(double alpha, double beta) const override {
    if (beta <= 0.0) return kInf;
    const double per_direction = scale_ * std::sqrt(k_ * beta);
    const double joint = scale_ * std::sqrt(beta);
    if (q_ == 1.0) {
      return std::min(k_ * alpha / (2.0 * per_direction * per_direction),
                      alpha / (2.0 * joint * joint));
    }
    absl::StatusOr<double> a = SgmRdp(alpha, q_, per_direction);
    absl::StatusOr<double> b = SgmRdp(alpha, q_, joint);
    if (!a.ok()) Record(a.status());
    if (!b.ok()) Record(b.status());
    if (!a.ok() || !b.ok()) return kInf;
    return std::min(k_ * *a, *b);
  }
  bool linear_in_alpha() const override { return q_ == 1.0; }

 private:
  double q_;
  double k_;
  double scale_;
};

struct ThetaChoice {
  double theta = 0.0;
  double log_ratio = 0.0;  // -log(cbar1)
  double cbar1 = 1.0;
};

struct Evaluation {
  int64_t tau = 0;
  int theta_index = -1;  // -1 for the tau = 0 branch.
  double theta = 0.0;
  double delta_f = 0.0;
  double delta_p = 0.0;
  double epsilon = kInf;
  size_t alpha_index = 0;
  std::vector<double> rho;
  std::vector<double> beta;
};

bool Better(const Evaluation& a, const Evaluation& b) {
  const double beta_a = a.beta.empty() ? 0.0 : a.beta[a.alpha_index];
  const double beta_b = b.beta.empty() ? 0.0 : b.beta[b.alpha_index];
  return std::tie(a.epsilon, a.tau, a.theta, beta_a) <
         std::tie(b.epsilon, b.tau, b.theta, beta_b);
}

// Golden-section search of f over [lo, hi]; returns (argmin, min).
template <typename F>
std::pair<double, double> GoldenSection(F&& f, double lo, double hi,
                                        double best_x, double best_f) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < kGoldenIterations && b - a > 1e-12; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  if (f1 < best_f) {
    best_f = f1;
    best_x = x1;
  }
  if (f2 < best_f) {
    best_f = f2;
    best_x = x2;
  }
  return {best_x, best_f};
}

class HiddenStateSearch {
 public:
  HiddenStateSearch(const ProblemParams& params, int64_t T, double delta,
                    const AccountingOptions& options, const StepCost& cost,
                    double c)
      : params_(params),
        T_(T),
        delta_(delta),
        options_(options),
        cost_(cost),
        c_(c),
        c2_(C2(params)),
        iso_coef_(static_cast<double>(params.d) /
                  (2.0 * params.eta * params.eta * params.sigma *
                   params.sigma)) {
    for (int j = 0; j < kLogitGridPoints; ++j) {
      logit_grid_.push_back(kLogitLo + (kLogitHi - kLogitLo) * j /
                                           (kLogitGridPoints - 1));
    }
  }

  absl::StatusOr<AccountResult> Run(Analysis tag);

 private:
  absl::Status BuildThetas();
  void BuildCostTable();
  Evaluation EvaluateTauZero() const;
  Evaluation Evaluate(int64_t tau, int theta_index, bool refine) const;
  double SearchTheta(int theta_index, std::vector<Evaluation>* top);
  void Offer(Evaluation e, std::vector<Evaluation>* top) const;
  absl::StatusOr<Schedule> Materialize(const Evaluation& e) const;

  // Per-alpha (beta, rho) minimizing L * Cost(alpha, beta) + alpha kappa / (1 - beta).
  std::pair<double, double> OptimizeBeta(size_t alpha_index, double L,
                                         double kappa, bool refine) const;

  const ProblemParams& params_;
  const int64_t T_;
  const double delta_;
  const AccountingOptions& options_;
  const StepCost& cost_;
  const double c_;
  const double c2_;
  const double iso_coef_;
  std::vector<double> logit_grid_;
  std::vector<ThetaChoice> thetas_;
  // cost_table_[i][j] = Cost(alpha_i, Sigmoid(logit_grid_[j])); nonlinear only.
  std::vector<std::vector<double>> cost_table_;
};

absl::Status HiddenStateSearch::BuildThetas() {
  std::vector<double> candidates;
  if (c_ < 1.0) {
    ZODP_ASSIGN_OR_RETURN(double star, ThetaStar(c_));
    candidates.push_back(star);
  } else {
    candidates = options_.theta_grid;
  }
  for (double theta : candidates) {
    if (!(std::isfinite(theta) && theta >= 0.0)) {
      return Invalid("theta grid values must be finite and >= 0");
    }
    ZODP_ASSIGN_OR_RETURN(double cbar1,
                          CBar1(c_, params_.K, params_.d, theta));
    thetas_.push_back({theta, -std::log(cbar1), cbar1});
  }
  return absl::OkStatus();
}

void HiddenStateSearch::BuildCostTable() {
  if (cost_.linear_in_alpha()) return;
  const std::vector<double>& alphas = options_.alpha_grid;
  cost_table_.assign(alphas.size(), std::vector<double>(logit_grid_.size()));
  for (size_t i = 0; i < alphas.size(); ++i) {
    for (size_t j = 0; j < logit_grid_.size(); ++j) {
      cost_table_[i][j] = cost_.Cost(alphas[i], Sigmoid(logit_grid_[j]));
    }
  }
}

std::pair<double, double> HiddenStateSearch::OptimizeBeta(size_t alpha_index,
                                                          double L,
                                                          double kappa,
                                                          bool refine) const {
  const bool linear = cost_.linear_in_alpha();
  const double alpha = linear ? 1.0 : options_.alpha_grid[alpha_index];
  // 1 / (1 - sigmoid(u)) = 1 + exp(u).
  auto objective = [&](double u) {
    return L * cost_.Cost(alpha, Sigmoid(u)) + alpha * kappa * (1.0 + std::exp(u));
  };
  size_t best_j = 0;
  double best_f = kInf;
  for (size_t j = 0; j < logit_grid_.size(); ++j) {
    const double u = logit_grid_[j];
    const double f =
        linear ? objective(u)
               : L * cost_table_[alpha_index][j] + alpha * kappa * (1.0 + std::exp(u));
    if (f < best_f) {
      best_f = f;
      best_j = j;
    }
  }
  double best_u = logit_grid_[best_j];
  if (linear || refine) {
    const double lo = logit_grid_[best_j == 0 ? 0 : best_j - 1];
    const double hi =
        logit_grid_[std::min(best_j + 1, logit_grid_.size() - 1)];
    std::tie(best_u, best_f) = GoldenSection(objective, lo, hi, best_u, best_f);
  }
  return {Sigmoid(best_u), best_f};
}

Evaluation HiddenStateSearch::EvaluateTauZero() const {
  // Both processes share w_0 and every draw, so they coincide forever: no
  // shift, no Lipschitz event, delta_f = 0, and beta = 1 is optimal.
  Evaluation e;
  e.tau = 0;
  e.delta_f = 0.0;
  e.delta_p = delta_;
  const std::vector<double>& alphas = options_.alpha_grid;
  e.rho.resize(alphas.size());
  e.beta.assign(alphas.size(), 1.0);
  const double steps = static_cast<double>(T_);
  for (size_t i = 0; i < alphas.size(); ++i) {
    e.rho[i] = T_ == 0 ? 0.0 : steps * cost_.Cost(alphas[i], 1.0);
  }
  e.epsilon = ConversionEpsilon(alphas, e.rho, e.delta_p, &e.alpha_index);
  return e;
}

Evaluation HiddenStateSearch::Evaluate(int64_t tau, int theta_index,
                                       bool refine) const {
  Evaluation e;
  e.tau = tau;
  e.theta_index = theta_index;
  const ThetaChoice& th = thetas_[theta_index];
  e.theta = th.theta;
  const int64_t L = T_ - tau;
  absl::StatusOr<double> delta_f =
      DeltaF({params_.K, params_.d, th.theta, L});
  if (!delta_f.ok() || *delta_f > options_.delta_f_fraction * delta_) {
    return e;
  }
  e.delta_f = *delta_f;
  e.delta_p = delta_ - e.delta_f;

  // a'_t = W w_t / S2 with w_t = cbar1^{-(t - tau + 1)}; closed-form sums.
  const double W = WinfBound(tau, params_);
  const double log_s1 = LogGeometricSum(th.log_ratio, L);
  const double log_s2 = LogGeometricSum(2.0 * th.log_ratio, L);
  const double sum_sq = W * W * std::exp(-log_s2);
  const double sum_lin = W * std::exp(log_s1 - log_s2);
  const double l = static_cast<double>(L);
  const double shift_energy = sum_sq + 2.0 * c2_ * sum_lin + l * c2_ * c2_;
  const double kappa = iso_coef_ * shift_energy;

  const std::vector<double>& alphas = options_.alpha_grid;
  e.rho.resize(alphas.size());
  e.beta.resize(alphas.size());
  if (cost_.linear_in_alpha()) {
    auto [beta, g] = OptimizeBeta(0, l, kappa, true);
    for (size_t i = 0; i < alphas.size(); ++i) {
      e.rho[i] = alphas[i] * g;
      e.beta[i] = beta;
    }
  } else {
    for (size_t i = 0; i < alphas.size(); ++i) {
      std::tie(e.beta[i], e.rho[i]) = OptimizeBeta(i, l, kappa, refine);
    }
  }
  e.epsilon = ConversionEpsilon(alphas, e.rho, e.delta_p, &e.alpha_index);
  return e;
}

void HiddenStateSearch::Offer(Evaluation e, std::vector<Evaluation>* top) const {
  if (!std::isfinite(e.epsilon)) return;
  const size_t capacity =
      cost_.linear_in_alpha() ? 1 : static_cast<size_t>(kRefinedCandidates);
  top->push_back(std::move(e));
  std::sort(top->begin(), top->end(), Better);
  if (top->size() > capacity) top->resize(capacity);
}

double HiddenStateSearch::SearchTheta(int theta_index,
                                      std::vector<Evaluation>* top) {
  std::map<int64_t, double> memo;
  auto eval = [&](int64_t tau) {
    auto it = memo.find(tau);
    if (it != memo.end()) return it->second;
    Evaluation e = Evaluate(tau, theta_index, false);
    const double eps = e.epsilon;
    memo.emplace(tau, eps);
    Offer(std::move(e), top);
    return eps;
  };
  if (T_ <= 1) return kInf;
  if (T_ <= kExhaustiveTauLimit) {
    double best = kInf;
    for (int64_t tau = 1; tau < T_; ++tau) best = std::min(best, eval(tau));
    return best;
  }

  // Geometric grids in both tau and T - tau, then integer ternary search
  // between the neighbours of the best grid point.
  std::vector<int64_t> grid;
  const double log_t = std::log(static_cast<double>(T_ - 1));
  for (int i = 0; i < kGeometricTauPoints; ++i) {
    const int64_t v = std::llround(std::exp(log_t * i / (kGeometricTauPoints - 1)));
    grid.push_back(std::clamp<int64_t>(v, 1, T_ - 1));
    grid.push_back(std::clamp<int64_t>(T_ - v, 1, T_ - 1));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  size_t best_idx = 0;
  double best = kInf;
  for (size_t i = 0; i < grid.size(); ++i) {
    const double eps = eval(grid[i]);
    if (eps < best) {
      best = eps;
      best_idx = i;
    }
  }
  if (!std::isfinite(best)) return best;
  int64_t lo = grid[best_idx == 0 ? 0 : best_idx - 1];
  int64_t hi = grid[std::min(best_idx + 1, grid.size() - 1)];
  while (hi - lo > 3) {
    const int64_t m1 = lo + (hi - lo) / 3;
    const int64_t m2 = hi - (hi - lo) / 3;
    if (eval(m1) <= eval(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  int64_t center = lo;
  for (int64_t tau = lo; tau <= hi; ++tau) {
    if (eval(tau) < eval(center)) center = tau;
  }
  for (int64_t tau = std::max<int64_t>(1, center - 4);
       tau <= std::min<int64_t>(T_ - 1, center + 4); ++tau) {
    best = std::min(best, eval(tau));
  }
  for (const auto& [tau, eps] : memo) best = std::min(best, eps);
  return best;
}

absl::StatusOr<Schedule> HiddenStateSearch::Materialize(
    const Evaluation& e) const {
  Schedule s;
  s.T = T_;
  s.tau = e.tau;
  const int64_t L = T_ - e.tau;
  const double beta = e.beta[e.alpha_index];
  s.beta.assign(L, beta);
  s.a.assign(L, 0.0);
  s.z.assign(L + 1, 0.0);
  if (e.tau == 0) return s;
  const ThetaChoice& th = thetas_[e.theta_index];
  const double W = WinfBound(e.tau, params_);
  const double log_s2 = LogGeometricSum(2.0 * th.log_ratio, L);
  for (int64_t j = 0; j < L; ++j) {
    s.a[j] = W * std::exp(static_cast<double>(j + 1) * th.log_ratio - log_s2) + c2_;
  }
  for (int64_t j = L - 1; j >= 0; --j) {
    s.z[j] = (s.z[j + 1] + s.a[j] - c2_) / th.cbar1;
  }
  return s;
}

absl::StatusOr<AccountResult> HiddenStateSearch::Run(Analysis tag) {
  ZODP_RETURN_IF_ERROR(BuildThetas());
  BuildCostTable();
  ZODP_RETURN_IF_ERROR(cost_.status());

  std::vector<Evaluation> top;
  for (int i = 0; i < static_cast<int>(thetas_.size()); ++i) {
    SearchTheta(i, &top);
    ZODP_RETURN_IF_ERROR(cost_.status());
  }
  Evaluation best = EvaluateTauZero();
  if (!cost_.linear_in_alpha()) {
    for (Evaluation& e : top) e = Evaluate(e.tau, e.theta_index, true);
    ZODP_RETURN_IF_ERROR(cost_.status());
  }
  for (Evaluation& e : top) {
    if (Better(e, best)) best = std::move(e);
  }
  if (!std::isfinite(best.epsilon)) {
    return MakeError(ErrorKind::kNoFeasibleSchedule,
                     absl::StrCat("no (tau, theta) keeps delta_f within ",
                                  options_.delta_f_fraction, " * delta"));
  }

  AccountResult result;
  result.analysis = tag;
  result.epsilon = best.epsilon;
  result.delta = delta_;
  result.alpha_star = options_.alpha_grid[best.alpha_index];
  result.tau_star = best.tau;
  if (best.theta_index >= 0) result.theta = best.theta;
  result.beta = best.beta[best.alpha_index];
  result.delta_p = best.delta_p;
  result.delta_f = best.delta_f;
  ZODP_ASSIGN_OR_RETURN(result.rdp,
                        RdpCurve::Create(options_.alpha_grid, best.rho));
  if (T_ - best.tau <= options_.max_schedule_length) {
    ZODP_ASSIGN_OR_RETURN(Schedule schedule, Materialize(best));
    DerivedConstants consts;
    consts.c = c_;
    consts.c2 = c2_;
    consts.theta = best.theta;
    consts.cbar1 = best.theta_index >= 0 ? thetas_[best.theta_index].cbar1 : 1.0;
    absl::Status feasible = CheckScheduleFeasible(params_, schedule, consts);
    if (!feasible.ok()) {
      return MakeError(ErrorKind::kInfeasibleSchedule,
                       absl::StrCat("optimizer produced a schedule that fails "
                                    "the independent check: ",
                                    feasible.message()));
    }
    result.schedule = std::move(schedule);
  }
  return result;
}

absl::Status ValidateCommon(const ProblemParams& params, double delta,
                            int64_t T, const AccountingOptions& options) {
  ZODP_RETURN_IF_ERROR(ValidateParams(params));
  if (!(delta > 0.0 && delta < 1.0)) return Invalid("delta must lie in (0, 1)");
  if (T < 0) return Invalid("T must be >= 0");
  if (options.alpha_grid.empty()) return Invalid("alpha grid is empty");
  ZODP_RETURN_IF_ERROR(
      RdpCurve::Create(options.alpha_grid,
                       std::vector<double>(options.alpha_grid.size(), 0.0))
          .status());
  if (!(options.delta_f_fraction >= 0.0 && options.delta_f_fraction < 1.0)) {
    return Invalid("delta_f_fraction must lie in [0, 1)");
  }
  return absl::OkStatus();
}

absl::StatusOr<AccountResult> FromCurve(Analysis analysis, double delta,
                                        double delta_p,
                                        const std::vector<double>& alphas,
                                        std::vector<double> rho) {
  AccountResult result;
  result.analysis = analysis;
  result.delta = delta;
  result.delta_p = delta_p;
  result.delta_f = 0.0;
  ZODP_ASSIGN_OR_RETURN(result.rdp, RdpCurve::Create(alphas, std::move(rho)));
  ZODP_ASSIGN_OR_RETURN(DpConversion conv, RdpToDp(result.rdp, delta_p));
  result.epsilon = conv.epsilon;
  result.alpha_star = conv.alpha_star;
  return result;
}

}  // namespace

std::string_view AnalysisName(Analysis analysis) {
  switch (analysis) {
    case Analysis::kHiddenState:
      return "hidden_state";
    case Analysis::kCompositionBeta1:
      return "composition_beta1";
    case Analysis::kCompositionBeta0:
      return "composition_beta0";
    case Analysis::kOutputPerturbation:
      return "output_perturbation";
    case Analysis::kClosedForm:
      return "closed_form";
    case Analysis::kMinibatchHiddenState:
      return "minibatch_hidden_state";
  }
  return "unknown";
}

absl::StatusOr<Analysis> ParseAnalysis(std::string_view name) {
  for (Analysis a :
       {Analysis::kHiddenState, Analysis::kCompositionBeta1,
        Analysis::kCompositionBeta0, Analysis::kOutputPerturbation,
        Analysis::kClosedForm, Analysis::kMinibatchHiddenState}) {
    if (AnalysisName(a) == name) return a;
  }
  return MakeError(ErrorKind::kConfigError,
                   absl::StrCat("unknown analysis '", std::string(name), "'"));
}

std::vector<double> DefaultThetaGrid() {
  std::vector<double> grid;
  constexpr int kPoints = 64;
  for (int i = 0; i < kPoints; ++i) {
    grid.push_back(std::pow(10.0, -3.0 + 5.0 * i / (kPoints - 1)));
  }
  return grid;
}

double WinfBound(int64_t t, const ProblemParams& params) {
  const double drift = 2.0 * params.eta * params.Delta * static_cast<double>(t) /
                       std::sqrt(static_cast<double>(params.K));
  return std::min(2.0 * params.R, drift);
}

absl::Status CheckScheduleFeasible(const ProblemParams& params,
                                   const Schedule& schedule,
                                   const DerivedConstants& consts) {
  auto fail = [](std::string_view why) {
    return MakeError(ErrorKind::kInfeasibleSchedule, why);
  };
  if (schedule.tau < 0 || schedule.tau > schedule.T) {
    return fail("tau outside [0, T]");
  }
  const int64_t L = schedule.T - schedule.tau;
  if (static_cast<int64_t>(schedule.beta.size()) != L ||
      static_cast<int64_t>(schedule.a.size()) != L ||
      static_cast<int64_t>(schedule.z.size()) != L + 1) {
    return fail("schedule vectors do not match T - tau");
  }
  for (int64_t j = 0; j < L; ++j) {
    if (!(schedule.beta[j] >= 0.0 && schedule.beta[j] <= 1.0)) {
      return fail(absl::StrCat("beta outside [0, 1] at step ", schedule.tau + j));
    }
    if (!(schedule.a[j] >= 0.0) || !std::isfinite(schedule.a[j])) {
      return fail(absl::StrCat("a is negative at step ", schedule.tau + j));
    }
  }
  if (schedule.z.back() != 0.0) return fail("z_T must be 0");
  const bool synchronous =
      schedule.tau == 0 &&
      std::all_of(schedule.a.begin(), schedule.a.end(),
                  [](double v) { return v == 0.0; }) &&
      std::all_of(schedule.z.begin(), schedule.z.end(),
                  [](double v) { return v == 0.0; });
  if (synchronous) return absl::OkStatus();
  if (!(consts.cbar1 > 0.0)) return fail("cbar1 must be positive");

  const double target = WinfBound(schedule.tau, params);
  const double scale = std::max({target, consts.c2, 1e-300});
  double z = 0.0;
  for (int64_t j = L - 1; j >= 0; --j) {
    z = (z + schedule.a[j] - consts.c2) / consts.cbar1;
    if (z < -1e-12 * scale) {
      return fail(absl::StrCat("z is negative at step ", schedule.tau + j));
    }
    const double stored = schedule.z[j];
    if (std::abs(stored - z) > 1e-9 * std::max(std::abs(z), scale)) {
      return fail(absl::StrCat("stored z disagrees with the recursion at step ",
                               schedule.tau + j));
    }
  }
  if (z < target * (1.0 - 1e-9)) {
    return fail(absl::StrCat("z_tau = ", z, " is below the W-infinity bound ",
                             target));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> RhoForSchedule(const ProblemParams& params,
                                      const Schedule& schedule, double alpha,
                                      const DerivedConstants& consts) {
  ZODP_RETURN_IF_ERROR(ValidateParams(params));
  if (!(std::isfinite(alpha) && alpha > 1.0)) return Invalid("alpha must be > 1");
  ZODP_RETURN_IF_ERROR(CheckScheduleFeasible(params, schedule, consts));
  const double s = 2.0 * params.Delta / static_cast<double>(params.n);
  const double iso = alpha * static_cast<double>(params.d) /
                     (2.0 * params.eta * params.eta * params.sigma * params.sigma);
  double sum = 0.0;
  double comp = 0.0;
  for (size_t j = 0; j < schedule.a.size(); ++j) {
    const double beta = schedule.beta[j];
    const double a = schedule.a[j];
    double term = 0.0;
    if (beta == 0.0) return kInf;
    ZODP_ASSIGN_OR_RETURN(double first,
                          GaussianRdp(alpha, s, params.sigma * std::sqrt(beta)));
    term = first;
    if (a > 0.0) {
      if (beta == 1.0) return kInf;
      term += iso * a * a / (1.0 - beta);
    }
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

absl::StatusOr<AccountResult> OptimizeHiddenState(
    const ProblemParams& params, int64_t T, double delta,
    const AccountingOptions& options) {
  ZODP_RETURN_IF_ERROR(ValidateCommon(params, delta, T, options));
  ZODP_RETURN_IF_ERROR(ValidateHiddenStateParams(params));
  ZODP_ASSIGN_OR_RETURN(double c, LipschitzC(params));
  GaussianStepCost cost(params);
  HiddenStateSearch search(params, T, delta, options, cost, c);
  return search.Run(Analysis::kHiddenState);
}

absl::StatusOr<AccountResult> MinibatchHiddenState(
    const ProblemParams& params, int64_t T, double delta,
    const AccountingOptions& options) {
  ZODP_RETURN_IF_ERROR(ValidateCommon(params, delta, T, options));
  ZODP_RETURN_IF_ERROR(ValidateHiddenStateParams(params));
  if (!params.batch.has_value()) {
    return Invalid("minibatch accounting needs a batch size");
  }
  ZODP_ASSIGN_OR_RETURN(double c, LipschitzC(params));
  SampledStepCost cost(params);
  HiddenStateSearch search(params, T, delta, options, cost, c);
  return search.Run(Analysis::kMinibatchHiddenState);
}

absl::StatusOr<AccountResult> ClosedFormStronglyConvex(
    const ProblemParams& params, double delta, int64_t T,
    const AccountingOptions& options) {
  ZODP_RETURN_IF_ERROR(ValidateCommon(params, delta, T, options));
  if (params.convexity != Convexity::kStronglyConvex) {
    return MakeError(ErrorKind::kPreconditionViolated,
                     "closed form needs a strongly convex loss");
  }
  std::vector<std::string> failures;
  const double k = static_cast<double>(params.K);
  if (std::abs(params.eta - k / params.M) > 1e-12 * (k / params.M)) {
    failures.push_back(absl::StrCat("eta = K/M (eta=", params.eta,
                                     ", K/M=", k / params.M, ")"));
  }
  absl::StatusOr<int64_t> min_k = MinK(params, delta);
  if (!min_k.ok()) {
    failures.push_back(absl::StrCat("min_K <= K <= d/2 (",
                                    min_k.status().message(), ")"));
  } else if (params.K < *min_k || params.K > params.d / 2) {
    failures.push_back(absl::StrCat("min_K <= K <= d/2 (min_K=", *min_k,
                                     ", K=", params.K, ", d/2=", params.d / 2,
                                     ")"));
  }
  ZODP_ASSIGN_OR_RETURN(double xi_max, XiMax(params));
  if (params.xi > xi_max) {
    failures.push_back(
        absl::StrCat("xi <= xi_max (xi=", params.xi, ", xi_max=", xi_max, ")"));
  }
  if (!failures.empty()) {
    return MakeError(ErrorKind::kPreconditionViolated,
                     absl::StrCat("closed form conditions fail: ",
                                  absl::StrJoin(failures, "; ")));
  }

  const double n = static_cast<double>(params.n);
  const double s2 = params.sigma * params.sigma;
  const double s = 2.0 * params.Delta / n;
  const double per_alpha_composition = static_cast<double>(T) * s * s / (2.0 * s2);
  const double per_alpha_saturated = 8.0 * params.Delta * params.R *
                                     std::sqrt(2.0 * params.d) /
                                     (params.eta * n * s2);
  const bool saturated = per_alpha_saturated < per_alpha_composition;
  std::vector<double> rho;
  for (double alpha : options.alpha_grid) {
    rho.push_back(alpha * std::min(per_alpha_composition, per_alpha_saturated));
  }
  const double delta_p = delta * (1.0 - options.delta_f_fraction);
  ZODP_ASSIGN_OR_RETURN(
      AccountResult result,
      FromCurve(Analysis::kClosedForm, delta, delta_p, options.alpha_grid,
                std::move(rho)));
  const double c = 1.0 - params.m / params.M;
  ZODP_ASSIGN_OR_RETURN(double theta, ThetaStar(c));
  if (saturated) {
    const int64_t steps = static_cast<int64_t>(std::ceil(
        n * params.R * std::sqrt(2.0 * params.d) / (params.Delta * params.eta)));
    ZODP_ASSIGN_OR_RETURN(result.delta_f,
                          DeltaF({params.K, params.d, theta, steps}));
    result.tau_star = std::max<int64_t>(0, T - steps);
    result.theta = theta;
    result.beta = 0.5;
  } else {
    result.tau_star = 0;
    result.beta = 1.0;
  }
  return result;
}

absl::StatusOr<AccountResult> CompositionBaseline(
    const ProblemParams& params, double delta, int64_t T,
    CompositionVariant variant, const AccountingOptions& options) {
  ZODP_RETURN_IF_ERROR(ValidateCommon(params, delta, T, options));
  const double s = 2.0 * params.Delta / static_cast<double>(params.n);
  const double steps = static_cast<double>(T);
  const double iso_factor =
      static_cast<double>(params.d) / static_cast<double>(params.K);
  std::vector<double> rho;
  for (double alpha : options.alpha_grid) {
    ZODP_ASSIGN_OR_RETURN(double per_step, GaussianRdp(alpha, s, params.sigma));
    if (variant == CompositionVariant::kBeta0) per_step *= iso_factor;
    rho.push_back(T == 0 ? 0.0 : steps * per_step);
  }
  const Analysis tag = variant == CompositionVariant::kBeta1
                           ? Analysis::kCompositionBeta1
                           : Analysis::kCompositionBeta0;
  ZODP_ASSIGN_OR_RETURN(AccountResult result,
                        FromCurve(tag, delta, delta, options.alpha_grid,
                                  std::move(rho)));
  result.beta = variant == CompositionVariant::kBeta1 ? 1.0 : 0.0;
  return result;
}

absl::StatusOr<AccountResult> OutputPerturbation(
    const ProblemParams& params, double delta,
    const AccountingOptions& options) {
  ZODP_RETURN_IF_ERROR(ValidateCommon(params, delta, 0, options));
  const double sensitivity =
      2.0 * params.R * std::sqrt(static_cast<double>(params.d)) / params.eta;
  std::vector<double> rho;
  for (double alpha : options.alpha_grid) {
    ZODP_ASSIGN_OR_RETURN(double r, GaussianRdp(alpha, sensitivity, params.sigma));
    rho.push_back(r);
  }
  return FromCurve(Analysis::kOutputPerturbation, delta, delta,
                   options.alpha_grid, std::move(rho));
}

absl::StatusOr<AccountResult> RunAnalysis(Analysis analysis,
                                          const ProblemParams& params,
                                          double delta, int64_t T,
                                          const AccountingOptions& options) {
  switch (analysis) {
    case Analysis::kHiddenState:
      return OptimizeHiddenState(params, T, delta, options);
    case Analysis::kCompositionBeta1:
      return CompositionBaseline(params, delta, T, CompositionVariant::kBeta1,
                                 options);
    case Analysis::kCompositionBeta0:
      return CompositionBaseline(params, delta, T, CompositionVariant::kBeta0,
                                 options);
    case Analysis::kOutputPerturbation:
      return OutputPerturbation(params, delta, options);
    case Analysis::kClosedForm:
      return ClosedFormStronglyConvex(params, delta, T, options);
    case Analysis::kMinibatchHiddenState:
      return MinibatchHiddenState(params, T, delta, options);
  }
  return Invalid("unknown analysis");
}

absl::StatusOr<std::vector<CurveRow>> AccountCurve(
    const ProblemParams& params, double delta,
    const std::vector<int64_t>& T_grid, const std::vector<Analysis>& analyses,
    const AccountingOptions& options, int threads) {
  if (T_grid.empty()) return Invalid("T grid is empty");
  for (size_t i = 1; i < T_grid.size(); ++i) {
    if (T_grid[i] <= T_grid[i - 1]) return Invalid("T grid must be ascending");
  }
  if (analyses.empty()) return Invalid("no analyses requested");

  std::vector<CurveRow> rows(T_grid.size());
  std::vector<absl::Status> statuses(T_grid.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < T_grid.size(); i = next++) {
      CurveRow& row = rows[i];
      row.T = T_grid[i];
      for (Analysis a : analyses) {
        absl::StatusOr<AccountResult> r =
            RunAnalysis(a, params, delta, row.T, options);
        if (!r.ok()) {
          statuses[i] = r.status();
          break;
        }
        row.results.push_back(*std::move(r));
      }
      if (!statuses[i].ok()) continue;
      size_t best = 0;
      for (size_t k = 1; k < row.results.size(); ++k) {
        if (row.results[k].epsilon < row.results[best].epsilon) best = k;
      }
      row.min = row.results[best];
      row.min.schedule.reset();
    }
  };
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(T_grid.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const absl::Status& s : statuses) ZODP_RETURN_IF_ERROR(s);
  return rows;
}

}  // namespace zodp

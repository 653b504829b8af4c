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

// zodp account|simulate|verify --config <path> --out <path> [--threads N]
//
// Exit codes: 0 success, 1 a verification check failed, 2 configuration or
// parameter error, 3 infeasible accounting request, 4 numerical failure.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "zodp/accountant.h"
#include "zodp/config.h"
#include "zodp/format.h"
#include "zodp/losses.h"
#include "zodp/rng.h"
#include "zodp/stats.h"
#include "zodp/status.h"
#include "zodp/verify.h"
#include "zodp/zogd.h"

namespace zodp {
namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

int ExitCodeFor(const absl::Status& status) {
  switch (GetErrorKind(status).value_or(ErrorKind::kConfigError)) {
    case ErrorKind::kNoFeasibleK:
    case ErrorKind::kInfeasibleSchedule:
    case ErrorKind::kNoFeasibleSchedule:
    case ErrorKind::kPreconditionViolated:
      return kExitInfeasible;
    case ErrorKind::kQuadratureNonConvergence:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

absl::StatusOr<std::string> ResolveOut(const std::string& flag, const Config& config) {
  if (!flag.empty()) return flag;
  if (config.output_path.has_value()) return *config.output_path;
  return MakeError(ErrorKind::kConfigError, "no output path (--out or output.path)");
}

absl::StatusOr<std::ofstream> OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return MakeError(ErrorKind::kConfigError, absl::StrCat("cannot write ", path));
  }
  return out;
}

int Account(const Config& config, const std::string& out_path, int threads) {
  if (absl::Status s = ValidateAccountConfig(config); !s.ok()) return Fail(s);
  const AccountingOptions options = MakeAccountingOptions(config);
  absl::StatusOr<std::vector<CurveRow>> rows =
      AccountCurve(*config.problem, *config.delta, config.T_grid, config.analyses,
                   options, threads);
  if (!rows.ok()) return Fail(rows.status());
  for (const CurveRow& row : *rows) {
    std::cerr << "T=" << row.T;
    for (const AccountResult& r : row.results) {
      std::cerr << " " << AnalysisName(r.analysis) << "=" << FormatDouble(r.epsilon);
    }
    std::cerr << " min=" << FormatDouble(row.min.epsilon) << "\n";
  }
  absl::StatusOr<std::ofstream> out = OpenOut(out_path);
  if (!out.ok()) return Fail(out.status());
  WriteAccountCsv(*out, *rows);
  return 0;
}

int Simulate(const Config& config, const std::string& out_path, int threads) {
  if (!config.problem.has_value()) {
    return Fail(MakeError(ErrorKind::kConfigError, "simulate needs a problem block"));
  }
  if (!config.simulate.has_value()) {
    return Fail(MakeError(ErrorKind::kConfigError, "simulate needs a simulate block"));
  }
  const ProblemParams& p = *config.problem;
  const SimulateConfig& sim = *config.simulate;
  if (absl::Status s = ValidateParams(p); !s.ok()) return Fail(s);
  if (sim.trials < 1) {
    return Fail(MakeError(ErrorKind::kConfigError, "simulate.trials must be >= 1"));
  }
  absl::StatusOr<std::unique_ptr<LossOracle>> loss =
      MakeLoss(sim.loss, p.M, p.m, MakeDataset(p.d, p.n, sim.feature_norm, sim.seed));
  if (!loss.ok()) return Fail(loss.status());

  RunOptions base;
  base.T = sim.T;
  base.beta = sim.beta_schedule;
  base.frame_mode = sim.frame_mode;
  if (sim.w0.has_value()) {
    base.w0 = Eigen::Map<const Eigen::VectorXd>(sim.w0->data(), sim.w0->size());
  }
  if (sim.paired && (sim.replaced_index < 0 || sim.replaced_index >= p.n)) {
    return Fail(MakeError(ErrorKind::kConfigError, "simulate.replaced_index outside [0, n)"));
  }

  struct TrialResult {
    absl::Status status;
    Trajectory first;
    Trajectory second;
    double final_loss = 0.0;
    double max_distance = 0.0;
    double max_excess = 0.0;
  };
  std::vector<TrialResult> results(sim.trials);
  std::atomic<int64_t> next{0};
  auto worker = [&]() {
    for (int64_t i = next++; i < sim.trials; i = next++) {
      TrialResult& r = results[i];
      RunOptions options = base;
      options.seed = i == 0 ? sim.seed : StreamSeed(sim.seed, i, 0, Purpose::kInit);
      if (sim.paired) {
        const Eigen::VectorXd replacement = -(*loss)->data().col(sim.replaced_index);
        auto pair = RunAdjacentPair(p, **loss, sim.replaced_index, replacement, options);
        if (!pair.ok()) {
          r.status = pair.status();
          continue;
        }
        r.first = std::move(pair->first);
        r.second = std::move(pair->second);
        for (size_t t = 0; t < r.first.w.size(); ++t) {
          const double dist = (r.first.w[t] - r.second.w[t]).norm();
          r.max_distance = std::max(r.max_distance, dist);
          r.max_excess = std::max(r.max_excess, dist - WinfBound(t, p));
        }
      } else {
        auto traj = Run(p, **loss, options);
        if (!traj.ok()) {
          r.status = traj.status();
          continue;
        }
        r.first = *std::move(traj);
      }
      r.final_loss = (*loss)->Value(r.first.w.back());
      if (i != 0) {
        r.first.w.clear();
        r.second.w.clear();
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::max<int64_t>(1, std::min<int64_t>(threads, sim.trials));
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const TrialResult& r : results) {
    if (!r.status.ok()) return Fail(r.status);
  }

  absl::StatusOr<std::ofstream> out = OpenOut(out_path);
  if (!out.ok()) return Fail(out.status());
  // Only trial 0 is written in full; every trial feeds the summary.
  WriteTrajectoryCsv(*out, results[0].first, **loss,
                     sim.paired ? &results[0].second : nullptr);

  std::vector<double> losses;
  double max_distance = 0.0;
  double max_excess = -INFINITY;
  for (const TrialResult& r : results) {
    losses.push_back(r.final_loss);
    max_distance = std::max(max_distance, r.max_distance);
    max_excess = std::max(max_excess, r.max_excess);
  }
  const MeanSe stats = MeanAndSe(losses);
  nlohmann::json summary = {{"trials", sim.trials},
                            {"T", sim.T},
                            {"final_loss_mean", stats.mean},
                            {"final_loss_se", stats.se},
                            {"final_losses", losses}};
  if (sim.paired) {
    summary["max_distance"] = max_distance;
    summary["max_distance_minus_bound"] = max_excess;
  }
  std::filesystem::path summary_path(out_path);
  summary_path.replace_filename(summary_path.stem().string() + ".summary.json");
  absl::StatusOr<std::ofstream> sout = OpenOut(summary_path.string());
  if (!sout.ok()) return Fail(sout.status());
  *sout << summary.dump(2) << "\n";
  return 0;
}

int Verify(const Config& config, const std::string& out_path, int threads) {
  const VerifyConfig verify = config.verify.value_or(VerifyConfig{});
  const std::vector<CheckRequest> checks = verify.checks.value_or(DefaultSuite());
  std::vector<absl::StatusOr<VerificationReport>> reports(
      checks.size(), absl::UnknownError("not run"));
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < checks.size(); i = next++) {
      reports[i] = RunCheck(checks[i].spec, checks[i].seed.value_or(verify.seed));
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::max<int>(1, std::min<int>(threads, checks.size()));
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  absl::StatusOr<std::ofstream> out = OpenOut(out_path);
  if (!out.ok()) return Fail(out.status());
  bool all_pass = true;
  for (const auto& report : reports) {
    if (!report.ok()) return Fail(report.status());
    *out << ReportToJson(*report).dump() << "\n";
    std::cerr << report->check << ": " << (report->pass ? "pass" : "FAIL") << "\n";
    all_pass = all_pass && report->pass;
  }
  return all_pass ? 0 : kExitCheckFailed;
}

}  // namespace
}  // namespace zodp

int main(int argc, char** argv) {
  CLI::App app{"Privacy accounting and simulation for noisy zeroth-order descent"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  int threads = std::max(1u, std::thread::hardware_concurrency());
  for (const char* name : {"account", "simulate", "verify"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config")->required();
    sub->add_option("--out", out_path, "Output file");
    sub->add_option("--threads", threads, "Worker cap")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : zodp::kExitConfig;
  }
  absl::StatusOr<zodp::Config> config = zodp::LoadConfigFile(config_path);
  if (!config.ok()) return zodp::Fail(config.status());
  absl::StatusOr<std::string> out = zodp::ResolveOut(out_path, *config);
  if (!out.ok()) return zodp::Fail(out.status());
  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "account") return zodp::Account(*config, *out, threads);
  if (command == "simulate") return zodp::Simulate(*config, *out, threads);
  return zodp::Verify(*config, *out, threads);
}

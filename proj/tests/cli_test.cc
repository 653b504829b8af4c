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

// Drives the zodp binary end to end through its exit codes and outputs.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code = -1;
  std::string err;
};

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("zodp_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path WriteConfig(const std::string& name, const json& j) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << j.dump(2);
    return path;
  }

  Outcome Run(const std::string& args) {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(ZODP_CLI_PATH) + " " + args + " 2> " +
                            err.string() + " > /dev/null";
    const int raw = std::system(cmd.c_str());
    Outcome out;
    out.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    out.err = ReadFile(err);
    return out;
  }

  fs::path dir_;
};

json StronglyConvexProblem() {
  return {{"d", 1000000}, {"n", 10000}, {"K", 204},   {"eta", 204.0},
          {"sigma", 0.05}, {"Delta", 1.0}, {"R", 1.0}, {"M", 1.0},
          {"m", 0.9},      {"xi", 0.0},  {"convexity", "strongly_convex"}};
}

TEST_F(CliTest, MissingSubcommandIsUsageError) {
  EXPECT_EQ(Run("").code, 2);
  EXPECT_EQ(Run("account").code, 2);
}

TEST_F(CliTest, MalformedConfigIsExitTwo) {
  const fs::path bad = WriteConfig("bad.json", {{"version", "1"}, {"bogus", 1}});
  Outcome o = Run("account --config " + bad.string() + " --out " + (dir_ / "a.csv").string());
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("error: "), std::string::npos);
  std::ofstream(dir_ / "broken.json") << "{ not json";
  EXPECT_EQ(Run("account --config " + (dir_ / "broken.json").string() + " --out x").code, 2);
  const fs::path no_out = WriteConfig("no_out.json", {{"version", "1"}});
  EXPECT_EQ(Run("verify --config " + no_out.string()).code, 2);
}

TEST_F(CliTest, InvalidParamsIsExitTwo) {
  json problem = StronglyConvexProblem();
  problem["sigma"] = -1.0;
  const fs::path cfg = WriteConfig(
      "c.json", {{"version", "1"}, {"problem", problem}, {"delta", 1e-5},
                 {"T_grid", {10}}, {"analyses", {"hidden_state"}}});
  EXPECT_EQ(Run("account --config " + cfg.string() + " --out " + (dir_ / "a.csv").string()).code,
            2);
}

TEST_F(CliTest, ClosedFormPreconditionIsExitThree) {
  json problem = StronglyConvexProblem();
  problem["eta"] = 100.0;
  const fs::path cfg = WriteConfig(
      "c.json", {{"version", "1"}, {"problem", problem}, {"delta", 1e-5},
                 {"T_grid", {10}}, {"analyses", {"closed_form"}}});
  Outcome o = Run("account --config " + cfg.string() + " --out " + (dir_ / "a.csv").string());
  EXPECT_EQ(o.code, 3);
  EXPECT_NE(o.err.find("eta = K/M"), std::string::npos) << o.err;
}

TEST_F(CliTest, AccountIsDeterministicAcrossRunsAndThreads) {
  const std::string cfg = std::string(ZODP_CONFIG_DIR) + "/strongly_convex_account.json";
  const fs::path a = dir_ / "a.csv";
  const fs::path b = dir_ / "b.csv";
  ASSERT_EQ(Run("account --config " + cfg + " --out " + a.string() + " --threads 1").code, 0);
  ASSERT_EQ(Run("account --config " + cfg + " --out " + b.string() + " --threads 3").code, 0);
  const std::string text = ReadFile(a);
  EXPECT_EQ(text, ReadFile(b));
  EXPECT_EQ(text.rfind("T,analysis,epsilon,delta,alpha_star,tau_star,theta,beta,delta_p,delta_f\n", 0),
            0u);
  // 7 T values, 5 analyses plus the min row each.
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 7 * 6);
}

TEST_F(CliTest, OutputPathFromConfig) {
  const fs::path out = dir_ / "from_config.csv";
  json j = {{"version", "1"}, {"problem", StronglyConvexProblem()}, {"delta", 1e-5},
            {"T_grid", {5}}, {"analyses", {"composition_beta1"}},
            {"output", {{"path", out.string()}}}};
  ASSERT_EQ(Run("account --config " + WriteConfig("c.json", j).string()).code, 0);
  EXPECT_TRUE(fs::exists(out));
}

TEST_F(CliTest, SimulateNoiselessLossDecreases) {
  json problem = {{"d", 20},   {"n", 30},   {"K", 5},     {"eta", 4.0},
                  {"sigma", 1e-12}, {"Delta", 1e6}, {"R", 1e6}, {"M", 1.0},
                  {"m", 0.5},  {"xi", 0.0}, {"convexity", "strongly_convex"}};
  json sim = {{"loss", "quadratic"}, {"T", 60}, {"trials", 2}, {"seed", 3},
              {"feature_norm", 1.0}, {"w0", std::vector<double>(20, 1.0)}};
  const fs::path cfg = WriteConfig("s.json", {{"version", "1"}, {"problem", problem},
                                              {"simulate", sim}});
  const fs::path out = dir_ / "traj.csv";
  ASSERT_EQ(Run("simulate --config " + cfg.string() + " --out " + out.string()).code, 0);
  std::istringstream in(ReadFile(out));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,norm_w,loss");
  double prev = INFINITY;
  int rows = 0;
  while (std::getline(in, line)) {
    const double loss = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_LE(loss, prev + 1e-12) << line;
    prev = loss;
    ++rows;
  }
  EXPECT_EQ(rows, 61);
  const json summary = json::parse(ReadFile(dir_ / "traj.summary.json"));
  EXPECT_EQ(summary["trials"].get<int>(), 2);
  EXPECT_EQ(summary["final_losses"].size(), 2u);
}

TEST_F(CliTest, SimulatePairedDistanceRespectsBound) {
  const std::string cfg = std::string(ZODP_CONFIG_DIR) + "/simulate_quadratic.json";
  const fs::path out = dir_ / "paired.csv";
  ASSERT_EQ(Run("simulate --config " + cfg + " --out " + out.string()).code, 0);
  const std::string text = ReadFile(out);
  EXPECT_EQ(text.rfind("t,norm_w,loss,distance\n", 0), 0u);
  const json summary = json::parse(ReadFile(dir_ / "paired.summary.json"));
  EXPECT_LE(summary["max_distance_minus_bound"].get<double>(), 1e-9);
  EXPECT_GT(summary["max_distance"].get<double>(), 0.0);
}

TEST_F(CliTest, VerifyFailingCheckIsExitOne) {
  json check = {{"name", "beta_utility_equivalence"},
                {"params", {{"test_hook_mis_scale_noise", true}}}};
  const fs::path cfg =
      WriteConfig("v.json", {{"version", "1"}, {"verify", {{"checks", {check}}}}});
  const fs::path out = dir_ / "v.jsonl";
  Outcome o = Run("verify --config " + cfg.string() + " --out " + out.string());
  EXPECT_EQ(o.code, 1);
  const json report = json::parse(ReadFile(out));
  EXPECT_FALSE(report["pass"].get<bool>());
  EXPECT_NE(o.err.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, VerifyEmptyCheckListWritesEmptyFile) {
  const fs::path cfg = WriteConfig(
      "v.json", {{"version", "1"}, {"verify", {{"checks", json::array()}}}});
  const fs::path out = dir_ / "v.jsonl";
  EXPECT_EQ(Run("verify --config " + cfg.string() + " --out " + out.string()).code, 0);
  EXPECT_TRUE(fs::exists(out));
  EXPECT_EQ(ReadFile(out), "");
}

TEST_F(CliTest, VerifyWritesOneLinePerCheck) {
  json checks = {{{"name", "beta_identity"}, {"params", {{"samples", 2000}}}},
                 {{"name", "iid_vs_orthonormal"}, {"params", {{"samples", 2000}}}}};
  const fs::path cfg = WriteConfig("v.json", {{"version", "1"}, {"verify", {{"checks", checks}}}});
  const fs::path out = dir_ / "v.jsonl";
  ASSERT_EQ(Run("verify --config " + cfg.string() + " --out " + out.string()).code, 0);
  std::istringstream in(ReadFile(out));
  std::string line;
  std::vector<std::string> names;
  while (std::getline(in, line)) names.push_back(json::parse(line)["check"]);
  EXPECT_EQ(names, (std::vector<std::string>{"beta_identity", "iid_vs_orthonormal"}));
}

}  // namespace

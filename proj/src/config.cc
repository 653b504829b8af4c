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

#include "zodp/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "zodp/format.h"
#include "zodp/params_json.h"
#include "zodp/status.h"

namespace zodp {
namespace {

using nlohmann::json;

absl::Status ConfigError(const std::string& message) {
  return MakeError(ErrorKind::kConfigError, message);
}

absl::Status CheckObject(const json& j, const std::string& path,
                         const std::set<std::string>& allowed) {
  if (!j.is_object()) return ConfigError(absl::StrCat(path, " must be an object"));
  for (const auto& item : j.items()) {
    if (allowed.count(item.key()) == 0) {
      return ConfigError(absl::StrCat("unknown key ", path, ".", item.key()));
    }
  }
  return absl::OkStatus();
}

std::string Where(const std::string& path, const std::string& key) {
  return absl::StrCat(path, ".", key);
}

absl::StatusOr<int64_t> AsInt(const json& v, const std::string& where) {
  if (!v.is_number_integer()) return ConfigError(absl::StrCat(where, " must be an integer"));
  return v.get<int64_t>();
}

absl::StatusOr<uint64_t> AsSeed(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer() && v.get<int64_t>() >= 0) {
    return static_cast<uint64_t>(v.get<int64_t>());
  }
  return ConfigError(absl::StrCat(where, " must be a non-negative integer"));
}

absl::StatusOr<double> AsDouble(const json& v, const std::string& where) {
  if (!v.is_number()) return ConfigError(absl::StrCat(where, " must be a number"));
  return v.get<double>();
}

absl::StatusOr<bool> AsBool(const json& v, const std::string& where) {
  if (!v.is_boolean()) return ConfigError(absl::StrCat(where, " must be a boolean"));
  return v.get<bool>();
}

absl::StatusOr<std::string> AsString(const json& v, const std::string& where) {
  if (!v.is_string()) return ConfigError(absl::StrCat(where, " must be a string"));
  return v.get<std::string>();
}

absl::StatusOr<std::vector<double>> AsDoubles(const json& v,
                                              const std::string& where) {
  if (!v.is_array()) return ConfigError(absl::StrCat(where, " must be an array"));
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) {
    ZODP_ASSIGN_OR_RETURN(double x, AsDouble(v[i], absl::StrCat(where, "[", i, "]")));
    out.push_back(x);
  }
  return out;
}

// A number is a one-element schedule.
absl::StatusOr<std::vector<double>> AsDoublesOrScalar(const json& v,
                                                      const std::string& where) {
  if (v.is_number()) return std::vector<double>{v.get<double>()};
  return AsDoubles(v, where);
}

absl::StatusOr<std::optional<std::vector<double>>> AsGrid(
    const json& v, const std::string& where) {
  if (v.is_string()) {
    if (v.get<std::string>() == "default") return std::optional<std::vector<double>>();
    return ConfigError(absl::StrCat(where, " must be \"default\" or an array"));
  }
  ZODP_ASSIGN_OR_RETURN(std::vector<double> grid, AsDoubles(v, where));
  return std::optional<std::vector<double>>(std::move(grid));
}

absl::StatusOr<ProblemParams> AsProblem(const json& v, const std::string& where) {
  absl::StatusOr<ProblemParams> p = ProblemParamsFromJson(v);
  if (!p.ok()) {
    return ConfigError(absl::StrCat(where, ": ", p.status().message()));
  }
  return p;
}

absl::StatusOr<CheckRequest> ParseCheck(const json& j, const std::string& path) {
  ZODP_RETURN_IF_ERROR(CheckObject(j, path, {"name", "params", "seed"}));
  if (!j.contains("name")) return ConfigError(absl::StrCat(path, ".name is missing"));
  ZODP_ASSIGN_OR_RETURN(std::string name, AsString(j.at("name"), Where(path, "name")));
  const json params = j.contains("params") ? j.at("params") : json::object();
  const std::string pp = Where(path, "params");
  CheckRequest request;
  if (j.contains("seed")) {
    ZODP_ASSIGN_OR_RETURN(uint64_t seed, AsSeed(j.at("seed"), Where(path, "seed")));
    request.seed = seed;
  }
  auto get = [&](const char* key) -> const json* {
    return params.contains(key) ? &params.at(key) : nullptr;
  };
  if (name == "beta_identity") {
    ZODP_RETURN_IF_ERROR(CheckObject(params, pp, {"d", "K", "samples"}));
    BetaIdentityConfig c;
    if (auto* v = get("d")) { ZODP_ASSIGN_OR_RETURN(c.d, AsInt(*v, Where(pp, "d"))); }
    if (auto* v = get("K")) { ZODP_ASSIGN_OR_RETURN(c.K, AsInt(*v, Where(pp, "K"))); }
    if (auto* v = get("samples")) {
      ZODP_ASSIGN_OR_RETURN(c.samples, AsInt(*v, Where(pp, "samples")));
    }
    request.spec = c;
  } else if (name == "lipschitz_tail") {
    ZODP_RETURN_IF_ERROR(
        CheckObject(params, pp, {"d", "K", "c", "theta", "cos_ab", "samples"}));
    LipschitzTailConfig c;
    if (auto* v = get("d")) { ZODP_ASSIGN_OR_RETURN(c.d, AsInt(*v, Where(pp, "d"))); }
    if (auto* v = get("K")) { ZODP_ASSIGN_OR_RETURN(c.K, AsInt(*v, Where(pp, "K"))); }
    if (auto* v = get("c")) { ZODP_ASSIGN_OR_RETURN(c.c, AsDouble(*v, Where(pp, "c"))); }
    if (auto* v = get("theta")) {
      ZODP_ASSIGN_OR_RETURN(double theta, AsDouble(*v, Where(pp, "theta")));
      c.theta = theta;
    }
    if (auto* v = get("cos_ab")) {
      ZODP_ASSIGN_OR_RETURN(c.cos_ab, AsDouble(*v, Where(pp, "cos_ab")));
    }
    if (auto* v = get("samples")) {
      ZODP_ASSIGN_OR_RETURN(c.samples, AsInt(*v, Where(pp, "samples")));
    }
    request.spec = c;
  } else if (name == "winf") {
    ZODP_RETURN_IF_ERROR(
        CheckObject(params, pp, {"problem", "trials", "T", "beta", "feature_norm"}));
    WinfConfig c;
    if (auto* v = get("problem")) {
      ZODP_ASSIGN_OR_RETURN(c.params, AsProblem(*v, Where(pp, "problem")));
    }
    if (auto* v = get("trials")) {
      ZODP_ASSIGN_OR_RETURN(c.trials, AsInt(*v, Where(pp, "trials")));
    }
    if (auto* v = get("T")) { ZODP_ASSIGN_OR_RETURN(c.T, AsInt(*v, Where(pp, "T"))); }
    if (auto* v = get("beta")) {
      ZODP_ASSIGN_OR_RETURN(c.beta, AsDouble(*v, Where(pp, "beta")));
    }
    if (auto* v = get("feature_norm")) {
      ZODP_ASSIGN_OR_RETURN(c.feature_norm, AsDouble(*v, Where(pp, "feature_norm")));
    }
    request.spec = c;
  } else if (name == "beta_utility_equivalence") {
    ZODP_RETURN_IF_ERROR(CheckObject(
        params, pp,
        {"problem", "betas", "trials", "T", "feature_norm", "test_hook_mis_scale_noise"}));
    UtilityConfig c;
    if (auto* v = get("problem")) {
      ZODP_ASSIGN_OR_RETURN(c.params, AsProblem(*v, Where(pp, "problem")));
    }
    if (auto* v = get("betas")) {
      ZODP_ASSIGN_OR_RETURN(c.betas, AsDoubles(*v, Where(pp, "betas")));
    }
    if (auto* v = get("trials")) {
      ZODP_ASSIGN_OR_RETURN(c.trials, AsInt(*v, Where(pp, "trials")));
    }
    if (auto* v = get("T")) { ZODP_ASSIGN_OR_RETURN(c.T, AsInt(*v, Where(pp, "T"))); }
    if (auto* v = get("feature_norm")) {
      ZODP_ASSIGN_OR_RETURN(c.feature_norm, AsDouble(*v, Where(pp, "feature_norm")));
    }
    if (auto* v = get("test_hook_mis_scale_noise")) {
      ZODP_ASSIGN_OR_RETURN(c.test_hook_mis_scale_noise,
                            AsBool(*v, Where(pp, "test_hook_mis_scale_noise")));
    }
    request.spec = c;
  } else if (name == "iid_vs_orthonormal") {
    ZODP_RETURN_IF_ERROR(CheckObject(params, pp, {"d", "K", "c", "samples"}));
    IidVsOrthonormalConfig c;
    if (auto* v = get("d")) { ZODP_ASSIGN_OR_RETURN(c.d, AsInt(*v, Where(pp, "d"))); }
    if (auto* v = get("K")) { ZODP_ASSIGN_OR_RETURN(c.K, AsInt(*v, Where(pp, "K"))); }
    if (auto* v = get("c")) { ZODP_ASSIGN_OR_RETURN(c.c, AsDouble(*v, Where(pp, "c"))); }
    if (auto* v = get("samples")) {
      ZODP_ASSIGN_OR_RETURN(c.samples, AsInt(*v, Where(pp, "samples")));
    }
    request.spec = c;
  } else {
    return ConfigError(absl::StrCat("unknown check '", name, "' at ", path));
  }
  return request;
}

json CheckToJson(const CheckRequest& request) {
  json params;
  struct Visitor {
    json& out;
    void operator()(const BetaIdentityConfig& c) {
      out = {{"d", c.d}, {"K", c.K}, {"samples", c.samples}};
    }
    void operator()(const LipschitzTailConfig& c) {
      out = {{"d", c.d}, {"K", c.K}, {"c", c.c}, {"cos_ab", c.cos_ab},
             {"samples", c.samples}};
      if (c.theta.has_value()) out["theta"] = *c.theta;
    }
    void operator()(const WinfConfig& c) {
      out = {{"problem", ProblemParamsToJson(c.params)}, {"trials", c.trials},
             {"T", c.T}, {"beta", c.beta}, {"feature_norm", c.feature_norm}};
    }
    void operator()(const UtilityConfig& c) {
      out = {{"problem", ProblemParamsToJson(c.params)},
             {"betas", c.betas},
             {"trials", c.trials},
             {"T", c.T},
             {"feature_norm", c.feature_norm},
             {"test_hook_mis_scale_noise", c.test_hook_mis_scale_noise}};
    }
    void operator()(const IidVsOrthonormalConfig& c) {
      out = {{"d", c.d}, {"K", c.K}, {"c", c.c}, {"samples", c.samples}};
    }
  };
  std::visit(Visitor{params}, request.spec);
  json j = {{"name", CheckName(request.spec)}, {"params", params}};
  if (request.seed.has_value()) j["seed"] = *request.seed;
  return j;
}

absl::StatusOr<SimulateConfig> ParseSimulate(const json& j) {
  const std::string path = "simulate";
  ZODP_RETURN_IF_ERROR(CheckObject(
      j, path,
      {"loss", "T", "trials", "beta_schedule", "seed", "feature_norm", "paired",
       "replaced_index", "frame_mode", "w0"}));
  SimulateConfig s;
  if (j.contains("loss")) {
    ZODP_ASSIGN_OR_RETURN(std::string name, AsString(j.at("loss"), Where(path, "loss")));
    ZODP_ASSIGN_OR_RETURN(s.loss, ParseLossKind(name));
  }
  if (j.contains("T")) {
    ZODP_ASSIGN_OR_RETURN(s.T, AsInt(j.at("T"), Where(path, "T")));
  }
  if (j.contains("trials")) {
    ZODP_ASSIGN_OR_RETURN(s.trials, AsInt(j.at("trials"), Where(path, "trials")));
  }
  if (j.contains("beta_schedule")) {
    ZODP_ASSIGN_OR_RETURN(s.beta_schedule,
                          AsDoublesOrScalar(j.at("beta_schedule"),
                                            Where(path, "beta_schedule")));
  }
  if (j.contains("seed")) {
    ZODP_ASSIGN_OR_RETURN(s.seed, AsSeed(j.at("seed"), Where(path, "seed")));
  }
  if (j.contains("feature_norm")) {
    ZODP_ASSIGN_OR_RETURN(s.feature_norm,
                          AsDouble(j.at("feature_norm"), Where(path, "feature_norm")));
  }
  if (j.contains("paired")) {
    ZODP_ASSIGN_OR_RETURN(s.paired, AsBool(j.at("paired"), Where(path, "paired")));
  }
  if (j.contains("replaced_index")) {
    ZODP_ASSIGN_OR_RETURN(s.replaced_index,
                          AsInt(j.at("replaced_index"), Where(path, "replaced_index")));
  }
  if (j.contains("frame_mode")) {
    ZODP_ASSIGN_OR_RETURN(std::string name,
                          AsString(j.at("frame_mode"), Where(path, "frame_mode")));
    ZODP_ASSIGN_OR_RETURN(s.frame_mode, ParseFrameMode(name));
  }
  if (j.contains("w0")) {
    ZODP_ASSIGN_OR_RETURN(std::vector<double> w0, AsDoubles(j.at("w0"), Where(path, "w0")));
    s.w0 = std::move(w0);
  }
  return s;
}

json SimulateToJson(const SimulateConfig& s) {
  json j = {{"loss", std::string(LossKindName(s.loss))},
            {"T", s.T},
            {"trials", s.trials},
            {"beta_schedule", s.beta_schedule},
            {"seed", s.seed},
            {"feature_norm", s.feature_norm},
            {"paired", s.paired},
            {"replaced_index", s.replaced_index},
            {"frame_mode", std::string(FrameModeName(s.frame_mode))}};
  if (s.w0.has_value()) j["w0"] = *s.w0;
  return j;
}

absl::StatusOr<VerifyConfig> ParseVerify(const json& j) {
  ZODP_RETURN_IF_ERROR(CheckObject(j, "verify", {"checks", "seed"}));
  VerifyConfig v;
  if (j.contains("seed")) {
    ZODP_ASSIGN_OR_RETURN(v.seed, AsSeed(j.at("seed"), "verify.seed"));
  }
  if (j.contains("checks")) {
    const json& checks = j.at("checks");
    if (checks.is_string() && checks.get<std::string>() == "default") {
      v.checks.reset();
    } else if (checks.is_array()) {
      std::vector<CheckRequest> list;
      for (size_t i = 0; i < checks.size(); ++i) {
        ZODP_ASSIGN_OR_RETURN(CheckRequest r,
                              ParseCheck(checks[i], absl::StrCat("verify.checks[", i, "]")));
        list.push_back(std::move(r));
      }
      v.checks = std::move(list);
    } else {
      return ConfigError("verify.checks must be \"default\" or an array");
    }
  }
  return v;
}

}  // namespace

absl::StatusOr<Config> ParseConfig(const json& j) {
  ZODP_RETURN_IF_ERROR(CheckObject(
      j, "config",
      {"version", "problem", "delta", "T_grid", "alpha_grid", "theta_grid",
       "delta_f_fraction", "analyses", "simulate", "verify", "output"}));
  if (!j.contains("version")) return ConfigError("config.version is missing");
  ZODP_ASSIGN_OR_RETURN(std::string version, AsString(j.at("version"), "config.version"));
  if (version != kConfigVersion) {
    return ConfigError(absl::StrCat("unsupported config version '", version, "'"));
  }
  Config c;
  if (j.contains("problem")) {
    ZODP_ASSIGN_OR_RETURN(ProblemParams p, AsProblem(j.at("problem"), "problem"));
    c.problem = p;
  }
  if (j.contains("delta")) {
    ZODP_ASSIGN_OR_RETURN(double delta, AsDouble(j.at("delta"), "config.delta"));
    c.delta = delta;
  }
  if (j.contains("T_grid")) {
    const json& grid = j.at("T_grid");
    if (!grid.is_array()) return ConfigError("config.T_grid must be an array");
    for (size_t i = 0; i < grid.size(); ++i) {
      ZODP_ASSIGN_OR_RETURN(int64_t T, AsInt(grid[i], absl::StrCat("config.T_grid[", i, "]")));
      c.T_grid.push_back(T);
    }
  }
  if (j.contains("alpha_grid")) {
    ZODP_ASSIGN_OR_RETURN(c.alpha_grid, AsGrid(j.at("alpha_grid"), "config.alpha_grid"));
  }
  if (j.contains("theta_grid")) {
    ZODP_ASSIGN_OR_RETURN(c.theta_grid, AsGrid(j.at("theta_grid"), "config.theta_grid"));
  }
  if (j.contains("delta_f_fraction")) {
    ZODP_ASSIGN_OR_RETURN(c.delta_f_fraction,
                          AsDouble(j.at("delta_f_fraction"), "config.delta_f_fraction"));
  }
  if (j.contains("analyses")) {
    const json& list = j.at("analyses");
    if (!list.is_array()) return ConfigError("config.analyses must be an array");
    for (size_t i = 0; i < list.size(); ++i) {
      ZODP_ASSIGN_OR_RETURN(std::string name,
                            AsString(list[i], absl::StrCat("config.analyses[", i, "]")));
      ZODP_ASSIGN_OR_RETURN(Analysis a, ParseAnalysis(name));
      c.analyses.push_back(a);
    }
  }
  if (j.contains("simulate")) {
    ZODP_ASSIGN_OR_RETURN(SimulateConfig s, ParseSimulate(j.at("simulate")));
    c.simulate = std::move(s);
  }
  if (j.contains("verify")) {
    ZODP_ASSIGN_OR_RETURN(VerifyConfig v, ParseVerify(j.at("verify")));
    c.verify = std::move(v);
  }
  if (j.contains("output")) {
    const json& out = j.at("output");
    ZODP_RETURN_IF_ERROR(CheckObject(out, "output", {"path"}));
    if (out.contains("path")) {
      ZODP_ASSIGN_OR_RETURN(std::string path, AsString(out.at("path"), "output.path"));
      c.output_path = path;
    }
  }
  return c;
}

absl::StatusOr<Config> LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return ConfigError(absl::StrCat("cannot open config file ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  json j = json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return ConfigError(absl::StrCat(path, " is not valid JSON"));
  return ParseConfig(j);
}

json SerializeConfig(const Config& c) {
  json j = {{"version", kConfigVersion}};
  if (c.problem.has_value()) j["problem"] = ProblemParamsToJson(*c.problem);
  if (c.delta.has_value()) j["delta"] = *c.delta;
  j["T_grid"] = c.T_grid;
  j["alpha_grid"] = c.alpha_grid.has_value() ? json(*c.alpha_grid) : json("default");
  j["theta_grid"] = c.theta_grid.has_value() ? json(*c.theta_grid) : json("default");
  j["delta_f_fraction"] = c.delta_f_fraction;
  json analyses = json::array();
  for (Analysis a : c.analyses) analyses.push_back(std::string(AnalysisName(a)));
  j["analyses"] = analyses;
  if (c.simulate.has_value()) j["simulate"] = SimulateToJson(*c.simulate);
  if (c.verify.has_value()) {
    json v = {{"seed", c.verify->seed}};
    if (c.verify->checks.has_value()) {
      json checks = json::array();
      for (const CheckRequest& r : *c.verify->checks) checks.push_back(CheckToJson(r));
      v["checks"] = checks;
    } else {
      v["checks"] = "default";
    }
    j["verify"] = v;
  }
  if (c.output_path.has_value()) j["output"] = {{"path", *c.output_path}};
  return j;
}

AccountingOptions MakeAccountingOptions(const Config& config) {
  AccountingOptions options;
  if (config.alpha_grid.has_value()) options.alpha_grid = *config.alpha_grid;
  if (config.theta_grid.has_value()) options.theta_grid = *config.theta_grid;
  options.delta_f_fraction = config.delta_f_fraction;
  return options;
}

absl::Status ValidateAccountConfig(const Config& config) {
  if (!config.problem.has_value()) return ConfigError("account needs a problem block");
  if (!config.delta.has_value()) return ConfigError("account needs delta");
  if (config.T_grid.empty()) return ConfigError("account needs a non-empty T_grid");
  if (config.analyses.empty()) return ConfigError("analyses list is empty");
  for (Analysis a : config.analyses) {
    if (a == Analysis::kClosedForm &&
        config.problem->convexity != Convexity::kStronglyConvex) {
      return ConfigError("closed_form applies only to strongly_convex problems");
    }
    if (a == Analysis::kMinibatchHiddenState && !config.problem->batch.has_value()) {
      return ConfigError("minibatch_hidden_state needs problem.batch");
    }
  }
  return absl::OkStatus();
}

void WriteAccountCsv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << kAccountCsvHeader << "\n";
  auto write = [&out](int64_t T, std::string_view name, const AccountResult& r) {
    out << T << "," << name << "," << FormatDouble(r.epsilon) << ","
        << FormatDouble(r.delta) << "," << FormatDouble(r.alpha_star) << ",";
    if (r.tau_star.has_value()) out << *r.tau_star;
    out << ",";
    if (r.theta.has_value()) out << FormatDouble(*r.theta);
    out << ",";
    if (r.beta.has_value()) out << FormatDouble(*r.beta);
    out << "," << FormatDouble(r.delta_p) << "," << FormatDouble(r.delta_f) << "\n";
  };
  for (const CurveRow& row : rows) {
    for (const AccountResult& r : row.results) write(row.T, AnalysisName(r.analysis), r);
    write(row.T, "min", row.min);
  }
}

}  // namespace zodp

// Copyright 2026 The FairCap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// faircap command-line tool.
//
//   faircap mine --config run.cfg [--jobs N] [--exhaustive-interventions]
//                [--expu-denominator covered|total]
//   faircap synth --rows 5000 --imm 3 --mut 2 --card 3 --seed 7
//                 --protected-frac 0.3 --effects '[...]' --out data/world
//   faircap evaluate --config run.cfg --ruleset report.json
//   faircap oracle-compare --config run.cfg
//
// Exit codes: 0 success, 1 input or usage error, 2 infeasible selection
// (mine) or report mismatch (evaluate).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "faircap/error.h"
#include "faircap/evaluation.h"
#include "faircap/io.h"
#include "faircap/logging.h"
#include "faircap/pipeline.h"
#include "faircap/selector.h"
#include "json.hpp"

namespace faircap {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kInvalidConfig, "cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw Error(ErrorCode::kInvalidConfig, "cannot write " + path.string());
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kSchemaMismatch, "cannot open " + path.string());
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json MetricsJson(const RulesetMetrics& m) {
  return {{"size", m.size},
          {"coverage", m.coverage_frac},
          {"coverage_protected", m.coverage_p_frac},
          {"exp_utility", m.exp_utility},
          {"exp_utility_protected", m.exp_utility_p},
          {"exp_utility_nonprotected", m.exp_utility_np},
          {"unfairness", m.unfairness}};
}

struct MineFlags {
  std::string config;
  bool exhaustive = false;
  std::optional<size_t> jobs;
  std::string denominator;
};

io::RunConfig LoadWithOverrides(const std::string& path,
                                std::optional<size_t> jobs,
                                const std::string& denominator) {
  io::RunConfig config = io::LoadRunConfig(path);
  if (jobs) config.mining.jobs = *jobs;
  if (!denominator.empty()) {
    const auto d = ParseDenominator(denominator);
    if (!d) {
      throw Error(ErrorCode::kInvalidConfig,
                  "--expu-denominator must be covered or total");
    }
    config.selection.denominator = *d;
  }
  return config;
}

int RunMine(const MineFlags& flags) {
  io::RunConfig config =
      LoadWithOverrides(flags.config, flags.jobs, flags.denominator);
  if (flags.exhaustive) config.mining.intervention.exhaustive = true;
  const io::LoadedInputs inputs = io::LoadInputs(config);
  const PipelineResult result = RunPipeline(inputs.dataset, inputs.dag,
                                            config.mining, config.selection);
  const std::string report = io::RenderReport(config, inputs.dataset, result);
  if (config.output.empty()) {
    std::cout << report;
  } else {
    WriteFile(config.output, report);
  }
  if (!config.markdown.empty()) {
    ExperimentRow row;
    row.label = "FairCap";
    row.metrics = result.selection.metrics;
    row.feasible = result.selection.feasible();
    std::string text = RenderMarkdownTable({row}) + "\n";
    for (const PrescriptionRule& r : result.selection.rules) {
      text += "- " + RenderRule(r, inputs.dataset.schema()) + "\n";
    }
    WriteFile(config.markdown, text);
  }
  for (const Violation& v : result.selection.violations) {
    std::cerr << "violation: " << v.clause << " measured " << v.measured
              << " bound " << v.bound << " (" << v.detail << ")\n";
  }
  return result.selection.feasible() ? kExitOk : kExitInfeasible;
}

struct SynthFlags {
  size_t rows = 1000;
  size_t imm = 3;
  size_t mut = 2;
  size_t card = 3;
  uint64_t seed = 1;
  double protected_frac = 0.3;
  double noise_sd = 1.0;
  double confounding = 0.5;
  std::string effects = "[]";
  std::string out;
};

std::vector<PlantedEffect> ParseEffects(const std::string& text) {
  std::vector<PlantedEffect> out;
  try {
    const Json j = Json::parse(text);
    for (const Json& e : j) {
      out.push_back({e.at("mutable").get<size_t>(), e.at("level").get<size_t>(),
                     e.at("protected").get<double>(),
                     e.at("nonprotected").get<double>()});
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string("--effects: expected a JSON list of "
                            "{mutable, level, protected, nonprotected}: ") +
                    e.what());
  }
  return out;
}

int RunSynth(const SynthFlags& flags) {
  SyntheticSpec spec;
  spec.n_rows = flags.rows;
  spec.n_immutable = flags.imm;
  spec.n_mutable = flags.mut;
  spec.categorical_cardinality = flags.card;
  spec.seed = flags.seed;
  spec.protected_fraction = flags.protected_frac;
  spec.noise_sd = flags.noise_sd;
  spec.confounding = flags.confounding;
  spec.effects = ParseEffects(flags.effects);
  const SyntheticWorld world = GenerateSynthetic(spec);

  const std::filesystem::path prefix(flags.out);
  const std::string stem = prefix.filename().string();
  std::ostringstream csv;
  io::WriteDatasetCsv(csv, world.dataset);
  WriteFile(prefix.string() + ".csv", csv.str());
  WriteFile(prefix.string() + ".dot", io::WriteDot(world.dag));

  Json truth;
  truth["seed"] = spec.seed;
  truth["rows"] = spec.n_rows;
  truth["protected_rows"] = world.dataset.num_protected();
  truth["noise_sd"] = spec.noise_sd;
  truth["confounding"] = spec.confounding;
  truth["immutable_coefficients"] = world.immutable_coefficients;
  Json effects = Json::array();
  for (const PlantedEffect& e : world.effects) {
    effects.push_back({{"attribute", "M" + std::to_string(e.mutable_index)},
                       {"value", "v" + std::to_string(e.level)},
                       {"protected", e.effect_protected},
                       {"nonprotected", e.effect_nonprotected}});
  }
  truth["effects"] = std::move(effects);
  WriteFile(prefix.string() + ".truth.json", truth.dump(2) + "\n");

  std::string immutable, mutables;
  for (size_t i = 0; i < spec.n_immutable; ++i) {
    immutable += (i ? ", I" : "I") + std::to_string(i);
  }
  for (size_t j = 0; j < spec.n_mutable; ++j) {
    mutables += (j ? ", M" : "M") + std::to_string(j);
  }
  std::string config;
  config += "# Generated by faircap synth --seed " + std::to_string(spec.seed) +
            "\n";
  config += "dataset = " + stem + ".csv\n";
  config += "dag = " + stem + ".dot\n";
  config += "outcome = O\n";
  config += "immutable = " + immutable + "\n";
  config += "mutable = " + mutables + "\n";
  config += "protected = I0 = v0\n";
  config += "output = " + stem + ".report.json\n";
  WriteFile(prefix.string() + ".config", config);
  return kExitOk;
}

int RunEvaluate(const std::string& config_path, const std::string& ruleset) {
  const io::RunConfig config = io::LoadRunConfig(config_path);
  const io::LoadedInputs inputs = io::LoadInputs(config);
  const io::ParsedReport report =
      io::ParseReport(ReadFile(ruleset), inputs.dataset.schema());
  const io::ReportCheck check = io::CheckReport(report, inputs, config);
  Json out;
  out["matches"] = check.matches();
  out["metrics"] = MetricsJson(check.recomputed);
  out["mismatches"] = check.mismatches;
  std::cout << out.dump(2) << "\n";
  return check.matches() ? kExitOk : kExitInfeasible;
}

int RunOracleCompare(const std::string& config_path,
                     std::optional<size_t> jobs) {
  const io::RunConfig config = LoadWithOverrides(config_path, jobs, "");
  const io::LoadedInputs inputs = io::LoadInputs(config);
  const MinedSpace space = MineSpace(inputs.dataset, inputs.dag, config.mining);
  const auto candidates =
      BuildCandidates(space, inputs.dataset, config.selection);
  if (candidates.size() > kMaxBruteForceCandidates) {
    throw Error(ErrorCode::kTooManyCandidates,
                std::to_string(candidates.size()) + " candidates, limit " +
                    std::to_string(kMaxBruteForceCandidates));
  }
  const SelectionResult greedy =
      GreedySelect(candidates, inputs.dataset, config.selection);
  std::optional<SelectionResult> oracle;
  try {
    oracle = BruteForceSelect(candidates, inputs.dataset, config.selection);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInfeasible) throw;
  }
  auto side = [](const SelectionResult* r) {
    Json j;
    j["feasible"] = r != nullptr && r->feasible();
    j["objective"] = r ? Json(r->objective) : Json(nullptr);
    j["size"] = r ? Json(r->selected.size()) : Json(nullptr);
    j["selected"] = r ? Json(r->selected) : Json(nullptr);
    return j;
  };
  Json out;
  out["candidates"] = candidates.size();
  out["greedy"] = side(&greedy);
  out["oracle"] = side(oracle ? &*oracle : nullptr);
  const bool agree = greedy.feasible() == oracle.has_value();
  out["feasibility_agreement"] = agree;
  if (greedy.feasible() && oracle) {
    out["objective_ratio"] =
        oracle->objective == 0.0 ? (greedy.objective == 0.0 ? 1.0 : 0.0)
                                 : greedy.objective / oracle->objective;
  } else {
    out["objective_ratio"] = nullptr;
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Causal prescription-rule mining with fairness and coverage "
               "constraints"};
  app.require_subcommand(1);

  MineFlags mine;
  std::optional<size_t> mine_jobs;
  CLI::App* mine_cmd = app.add_subcommand("mine", "mine and select rules");
  mine_cmd->add_option("--config", mine.config, "run config file")->required();
  mine_cmd->add_flag("--exhaustive-interventions", mine.exhaustive,
                     "evaluate every intervention pattern up to the length "
                     "limit instead of the pruned lattice");
  mine_cmd->add_option("--jobs", mine_jobs, "worker threads (0: all cores)");
  mine_cmd->add_option("--expu-denominator", mine.denominator,
                       "covered or total")
      ->check(CLI::IsMember({"covered", "total"}));

  SynthFlags synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "write a synthetic world with planted effects");
  synth_cmd->add_option("--rows", synth.rows)->required();
  synth_cmd->add_option("--imm", synth.imm)->required();
  synth_cmd->add_option("--mut", synth.mut)->required();
  synth_cmd->add_option("--card", synth.card)->required();
  synth_cmd->add_option("--seed", synth.seed)->required();
  synth_cmd->add_option("--protected-frac", synth.protected_frac)->required();
  synth_cmd->add_option("--effects", synth.effects,
                        "JSON list of {mutable, level, protected, "
                        "nonprotected}")
      ->required();
  synth_cmd->add_option("--noise-sd", synth.noise_sd);
  synth_cmd->add_option("--confounding", synth.confounding);
  synth_cmd->add_option("--out", synth.out,
                        "output prefix for .csv, .dot, .truth.json, .config")
      ->required();

  std::string eval_config, eval_ruleset;
  CLI::App* eval_cmd =
      app.add_subcommand("evaluate", "recompute a report's metrics");
  eval_cmd->add_option("--config", eval_config)->required();
  eval_cmd->add_option("--ruleset", eval_ruleset)->required();

  std::string oracle_config;
  std::optional<size_t> oracle_jobs;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle-compare", "compare greedy selection with exhaustive search");
  oracle_cmd->add_option("--config", oracle_config)->required();
  oracle_cmd->add_option("--jobs", oracle_jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  ConfigureLogging();
  try {
    if (*mine_cmd) {
      mine.jobs = mine_jobs;
      return RunMine(mine);
    }
    if (*synth_cmd) return RunSynth(synth);
    if (*eval_cmd) return RunEvaluate(eval_config, eval_ruleset);
    if (*oracle_cmd) return RunOracleCompare(oracle_config, oracle_jobs);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace
}  // namespace faircap

int main(int argc, char** argv) { return faircap::Main(argc, argv); }

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

#include "faircap/evaluation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "faircap/error.h"
#include "faircap/parallel.h"

namespace faircap {
namespace {

std::string Fixed2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string Percent(double fraction) {
  return Fixed2(100.0 * fraction) + "%";
}

std::string JoinPredicates(const Pattern& pattern, const Schema& schema,
                           const char* separator) {
  std::string out;
  for (const Predicate& p : pattern.predicates()) {
    if (!out.empty()) out += separator;
    out += FormatPredicate(p, schema);
  }
  return out;
}

}  // namespace

void SyntheticSpec::Validate() const {
  auto require = [](bool ok, const char* message) {
    if (!ok) throw Error(ErrorCode::kInvalidConfig, message);
  };
  require(n_rows >= 1, "rows must be positive");
  require(n_immutable >= 1, "need at least one immutable attribute");
  require(n_mutable >= 1, "need at least one mutable attribute");
  require(categorical_cardinality >= 2, "cardinality must be at least 2");
  require(protected_fraction > 0.0 && protected_fraction < 1.0,
          "protected fraction must lie in (0, 1)");
  require(std::isfinite(noise_sd) && noise_sd >= 0.0,
          "noise sd must be non-negative");
  require(confounding >= 0.0 && confounding <= 1.0,
          "confounding must lie in [0, 1]");
  for (const PlantedEffect& e : effects) {
    require(e.mutable_index < n_mutable, "effect names an unknown mutable");
    require(e.level < categorical_cardinality, "effect level out of range");
    require(std::isfinite(e.effect_protected) &&
                std::isfinite(e.effect_nonprotected),
            "effects must be finite");
  }
}

SyntheticWorld GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  const size_t n = spec.n_rows;
  const size_t k = spec.n_immutable;
  const size_t m = spec.n_mutable;
  const size_t c = spec.categorical_cardinality;

  std::vector<std::string> labels;
  for (size_t v = 0; v < c; ++v) labels.push_back("v" + std::to_string(v));

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<size_t> level(0, c - 1);
  std::uniform_int_distribution<size_t> other_level(1, c - 1);
  std::bernoulli_distribution is_protected(spec.protected_fraction);
  std::bernoulli_distribution follows(spec.confounding);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<std::vector<double>> columns(k + m + 1,
                                           std::vector<double>(n, 0.0));
  std::vector<double> coefficients(k);
  for (size_t i = 0; i < k; ++i) {
    coefficients[i] = static_cast<double>(i + 1) / static_cast<double>(k);
  }
  for (size_t r = 0; r < n; ++r) {
    const bool prot = is_protected(rng);
    columns[0][r] = prot ? 0.0 : static_cast<double>(other_level(rng));
    size_t code_sum = static_cast<size_t>(columns[0][r]);
    for (size_t i = 1; i < k; ++i) {
      columns[i][r] = static_cast<double>(level(rng));
      code_sum += static_cast<size_t>(columns[i][r]);
    }
    for (size_t j = 0; j < m; ++j) {
      const bool confounded = follows(rng);
      const size_t uniform = level(rng);
      columns[k + j][r] =
          static_cast<double>(confounded ? (code_sum + j) % c : uniform);
    }
    double y = 0.0;
    for (size_t i = 0; i < k; ++i) y += coefficients[i] * columns[i][r];
    for (const PlantedEffect& e : spec.effects) {
      if (columns[k + e.mutable_index][r] == static_cast<double>(e.level)) {
        y += prot ? e.effect_protected : e.effect_nonprotected;
      }
    }
    const double z = noise(rng);
    columns[k + m][r] = y + spec.noise_sd * z;
  }

  std::vector<AttributeSpec> attributes;
  for (size_t i = 0; i < k; ++i) {
    attributes.push_back({"I" + std::to_string(i), Role::kImmutable,
                          CategoricalDomain{labels}});
  }
  for (size_t j = 0; j < m; ++j) {
    attributes.push_back({"M" + std::to_string(j), Role::kMutable,
                          CategoricalDomain{labels}});
  }
  const auto& outcome = columns[k + m];
  const auto [lo, hi] = std::minmax_element(outcome.begin(), outcome.end());
  attributes.push_back({"O", Role::kOutcome, NumericDomain{*lo, *hi}});

  Schema schema(std::move(attributes));
  Pattern protected_pattern({Predicate{"I0", Op::kEq, 0.0}});
  CausalDag dag = GenerateSimplifiedDag(SimplifiedDagKind::kTwoLayer, schema);
  return SyntheticWorld{
      Dataset(std::move(schema), std::move(columns), protected_pattern),
      std::move(dag), spec.effects, std::move(coefficients)};
}

std::vector<ExperimentRow> RunVariantMatrix(
    const Dataset& dataset, const CausalDag& dag,
    const std::vector<VariantConfig>& configs, const MiningOptions& mining) {
  if (configs.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "variant matrix needs a config");
  }
  for (const VariantConfig& v : configs) v.config.Validate();
  const MinedSpace space = MineSpace(dataset, dag, mining);
  return ParallelMap(configs.size(), mining.jobs, [&](size_t i) {
    const auto start = std::chrono::steady_clock::now();
    const SelectionConfig& config = configs[i].config;
    const auto candidates = BuildCandidates(space, dataset, config);
    SelectionResult selection = GreedySelect(candidates, dataset, config);
    ExperimentRow row;
    row.label = configs[i].label;
    row.metrics = selection.metrics;
    row.feasible = selection.feasible();
    row.violations = std::move(selection.violations);
    row.candidates = candidates.size();
    row.rules = std::move(selection.rules);
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return row;
  });
}

std::vector<VariantConfig> StandardVariantMatrix(double epsilon, double tau,
                                                 double theta, double theta_p,
                                                 const SelectionConfig& base) {
  struct Fairness {
    FairnessMode mode;
    const char* label;
  };
  const Fairness fairness[] = {
      {FairnessMode::None(), ""},
      {FairnessMode::SpGroup(epsilon), "Group fairness (SP)"},
      {FairnessMode::SpIndividual(epsilon), "Individual fairness (SP)"},
      {FairnessMode::BglGroup(tau), "Group fairness (BGL)"},
      {FairnessMode::BglIndividual(tau), "Individual fairness (BGL)"},
  };
  struct Coverage {
    CoverageVariant variant;
    const char* label;
  };
  const Coverage coverage[] = {
      {CoverageVariant::kNone, ""},
      {CoverageVariant::kGroup, "Group coverage"},
      {CoverageVariant::kRule, "Rule coverage"},
  };
  std::vector<VariantConfig> out;
  for (const Coverage& cov : coverage) {
    for (const Fairness& fair : fairness) {
      VariantConfig v{"", base};
      v.config.fairness = fair.mode;
      v.config.coverage = {cov.variant, theta, theta_p};
      std::string label = cov.label;
      if (*fair.label) {
        if (!label.empty()) label += ", ";
        label += fair.label;
      }
      v.label = label.empty() ? "No constraints" : label;
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::string RenderRule(const PrescriptionRule& rule, const Schema& schema) {
  std::string out = rule.grouping.empty()
                        ? "For all individuals"
                        : "For individuals with " +
                              JoinPredicates(rule.grouping, schema, " and ");
  out += ", set " + JoinPredicates(rule.intervention, schema, ", ");
  out += " (exp utility protected: " + Fixed2(rule.utility_p) +
         ", non-protected: " + Fixed2(rule.utility_np) + ").";
  return out;
}

std::string RenderMarkdownTable(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "| variant | # rules | coverage | coverage pro | exp utility | "
         "exp utility non-pro | exp utility pro | unfairness |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const ExperimentRow& row : rows) {
    const RulesetMetrics& m = row.metrics;
    out << "| " << row.label << (row.feasible ? "" : " (infeasible)") << " | "
        << m.size << " | " << Percent(m.coverage_frac) << " | "
        << Percent(m.coverage_p_frac) << " | " << Fixed2(m.exp_utility)
        << " | " << Fixed2(m.exp_utility_np) << " | "
        << Fixed2(m.exp_utility_p) << " | " << Fixed2(m.unfairness) << " |\n";
  }
  return out.str();
}

}  // namespace faircap

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

// Synthetic worlds with planted effects, variant matrices over the fifteen
// fairness x coverage combinations, and human-readable rendering.

#ifndef FAIRCAP_EVALUATION_H_
#define FAIRCAP_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "faircap/causal.h"
#include "faircap/data.h"
#include "faircap/intervention_miner.h"
#include "faircap/pipeline.h"
#include "faircap/selection_config.h"
#include "faircap/selector.h"

namespace faircap {

// Setting mutable attribute M<mutable_index> to level v<level> adds
// effect_protected (protected rows) or effect_nonprotected to the outcome.
struct PlantedEffect {
  size_t mutable_index = 0;
  size_t level = 0;
  double effect_protected = 0.0;
  double effect_nonprotected = 0.0;
};

// Attributes are I0..I{k-1} (immutable), M0..M{m-1} (mutable) and the
// numeric outcome O; categorical labels are v0..v{c-1}. Rows with I0 = v0
// are protected. Each mutable takes the level (sum of immutable codes + its
// index) mod c with probability `confounding`, otherwise a uniform level.
// The outcome is sum_i (i + 1) / k * code(I_i) + planted effects + noise.
struct SyntheticSpec {
  size_t n_rows = 1000;
  size_t n_immutable = 3;
  size_t n_mutable = 2;
  size_t categorical_cardinality = 3;
  std::vector<PlantedEffect> effects;
  double noise_sd = 1.0;
  double protected_fraction = 0.3;
  uint64_t seed = 1;
  double confounding = 0.5;

  // Throws kInvalidConfig.
  void Validate() const;
};

struct SyntheticWorld {
  Dataset dataset;
  CausalDag dag;  // two-layer: I -> M, M -> O, I -> O
  std::vector<PlantedEffect> effects;
  std::vector<double> immutable_coefficients;
};

SyntheticWorld GenerateSynthetic(const SyntheticSpec& spec);

struct VariantConfig {
  std::string label;
  SelectionConfig config;
};

struct ExperimentRow {
  std::string label;
  RulesetMetrics metrics;
  double runtime_ms = 0.0;
  bool feasible = true;
  std::vector<Violation> violations;
  size_t candidates = 0;
  std::vector<PrescriptionRule> rules;
};

// Mines once, then builds candidates and runs greedy selection per config.
// Infeasible configs are reported, not thrown. Rows are computed in
// parallel over `mining.jobs`; only runtime_ms depends on scheduling.
std::vector<ExperimentRow> RunVariantMatrix(
    const Dataset& dataset, const CausalDag& dag,
    const std::vector<VariantConfig>& configs, const MiningOptions& mining);

// "No constraints", "Group coverage", ..., "Rule coverage, Individual
// fairness (BGL)": every fairness variant crossed with every coverage
// variant, using `base` for the remaining fields.
std::vector<VariantConfig> StandardVariantMatrix(double epsilon, double tau,
                                                 double theta, double theta_p,
                                                 const SelectionConfig& base = {});

// "For individuals with A = x and B = y, set M = v, N = w (exp utility
// protected: 1.23, non-protected: 4.56)."
std::string RenderRule(const PrescriptionRule& rule, const Schema& schema);

// Markdown table with one line per row: label, rules, coverage, coverage
// protected, exp utility, exp utility non-protected, exp utility
// protected, unfairness.
std::string RenderMarkdownTable(const std::vector<ExperimentRow>& rows);

}  // namespace faircap

#endif  // FAIRCAP_EVALUATION_H_

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

// Ruleset metrics, constraint checking, the selection objective, the greedy
// selector and an exhaustive oracle for small candidate sets.

#ifndef FAIRCAP_SELECTOR_H_
#define FAIRCAP_SELECTOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "faircap/data.h"
#include "faircap/intervention_miner.h"
#include "faircap/selection_config.h"

namespace faircap {

struct RulesetMetrics {
  size_t size = 0;
  double coverage_frac = 0.0;    // covered rows / n
  double coverage_p_frac = 0.0;  // covered protected rows / protected rows
  double exp_utility = 0.0;
  double exp_utility_p = 0.0;
  double exp_utility_np = 0.0;
  double unfairness = 0.0;       // exp_utility_np - exp_utility_p

  bool operator==(const RulesetMetrics&) const = default;
};

// (1/n) * sum over rows of the best utility among the rules covering it.
double ExpUtility(std::span<const PrescriptionRule> rules,
                  const Dataset& dataset);
// Protected rows take the worst covering rule; the sum is divided by the
// number of covered protected rows (or all protected rows with kTotal).
// Zero when nothing is covered.
double ExpUtilityProtected(
    std::span<const PrescriptionRule> rules, const Dataset& dataset,
    ExpUtilityDenominator denominator = ExpUtilityDenominator::kCovered);
double ExpUtilityNonProtected(
    std::span<const PrescriptionRule> rules, const Dataset& dataset,
    ExpUtilityDenominator denominator = ExpUtilityDenominator::kCovered);

RulesetMetrics ComputeMetrics(
    std::span<const PrescriptionRule> rules, const Dataset& dataset,
    ExpUtilityDenominator denominator = ExpUtilityDenominator::kCovered);

struct Violation {
  std::string clause;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

// Every configured coverage and fairness clause that `rules` violates.
// Empty means the ruleset is valid. Throws kEmptyProtectedGroup when a
// fairness mode is set and the protected pattern covers no row.
std::vector<Violation> CheckConstraints(std::span<const PrescriptionRule> rules,
                                        const Dataset& dataset,
                                        const SelectionConfig& config);

// The per-rule clauses (rule coverage, individual fairness) for one rule.
bool SatisfiesPerRuleConstraints(const PrescriptionRule& rule,
                                 const Dataset& dataset,
                                 const SelectionConfig& config);

// lambda1 * (l - |rules|) + lambda2 * ExpUtility(rules).
double Objective(std::span<const PrescriptionRule> rules, size_t num_candidates,
                 const Dataset& dataset, const SelectionConfig& config);

struct TraceStep {
  size_t iteration = 0;
  size_t candidate = 0;  // index into the candidate list
  double score = 0.0;
  double coverage_term = 0.0;
  double benefit_term = 0.0;
  double utility_term = 0.0;
  double exp_utility = 0.0;  // after adding the rule
  bool coverage_met = false;  // before adding the rule
};

struct SelectionResult {
  std::vector<size_t> selected;  // candidate indices, in selection order
  std::vector<PrescriptionRule> rules;
  RulesetMetrics metrics;
  double objective = 0.0;
  std::vector<TraceStep> trace;
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }
};

// Greedy selection. Candidates violating a per-rule clause are dropped
// first. Each iteration adds the eligible candidate with the highest
//   w_cov * coverage gain + w_ben * benefit / max benefit
//     + w_util * ExpUtility gain / max utility,
// where the coverage term only counts while group coverage is unmet. In
// group-fairness modes a candidate whose addition breaks the fairness
// clause is skipped, unless coverage is still unmet and no fair candidate
// adds coverage. Stops when the best score falls below the stop threshold,
// at max_rules, or when candidates run out. The result carries the
// remaining violations when the final set is invalid.
SelectionResult GreedySelect(const std::vector<PrescriptionRule>& candidates,
                             const Dataset& dataset,
                             const SelectionConfig& config);

inline constexpr size_t kMaxBruteForceCandidates = 20;

// Objective-maximal valid subset over all 2^l subsets; ties prefer fewer
// rules, then the lexicographically smallest index list. Throws
// kTooManyCandidates above kMaxBruteForceCandidates and kInfeasible when no
// subset is valid.
SelectionResult BruteForceSelect(const std::vector<PrescriptionRule>& candidates,
                                 const Dataset& dataset,
                                 const SelectionConfig& config);

}  // namespace faircap

#endif  // FAIRCAP_SELECTOR_H_

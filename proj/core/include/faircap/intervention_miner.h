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

// Intervention mining: for one grouping pattern, walk the lattice of
// equality patterns over mutable attributes top-down, only materializing a
// node when all of its parents have a positive, significant CATE.

#ifndef FAIRCAP_INTERVENTION_MINER_H_
#define FAIRCAP_INTERVENTION_MINER_H_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "faircap/causal.h"
#include "faircap/data.h"
#include "faircap/selection_config.h"

namespace faircap {

struct PrescriptionRule {
  Pattern grouping;
  Pattern intervention;
  double utility = 0.0;
  double utility_p = 0.0;
  double utility_np = 0.0;
  double p_value = 1.0;
  CoverageSet coverage;  // Coverage(grouping)
  double benefit = 0.0;
};

struct RuleUtilities {
  double utility = 0.0;
  double utility_p = 0.0;
  double utility_np = 0.0;
  double p_value = 1.0;
};

// CATE of the intervention over the grouping, its protected part and its
// non-protected part. A positivity failure zeroes that part's utility (an
// overall failure also sets p_value to 1). kSingularDesign propagates.
RuleUtilities ComputeRuleUtilities(const Dataset& dataset,
                                   const CausalDag& dag,
                                   const Pattern& grouping,
                                   const Pattern& intervention,
                                   const CateOptions& options = {});

double BenefitSp(double utility, double utility_p, double utility_np);
double BenefitBgl(double utility, double utility_p, double tau);
double BenefitSp(const PrescriptionRule& rule);
double BenefitBgl(const PrescriptionRule& rule, double tau);

// The ranking score used in the lattice for `mode`: plain utility without
// fairness, the SP benefit in SP modes, the BGL benefit in BGL modes.
double ModeBenefit(const RuleUtilities& utilities, const FairnessMode& mode);

// Per-rule fairness constraint of the individual modes; true otherwise.
bool SatisfiesIndividualFairness(double utility_p, double utility_np,
                                 const FairnessMode& mode);

struct InterventionOptions {
  size_t max_len = 3;
  double alpha = 0.05;
  bool significance_gate = true;
  // Enumerate every pattern up to max_len instead of the pruned lattice.
  bool exhaustive = false;
  CateOptions cate;
};

struct InterventionCandidate {
  Pattern intervention;
  RuleUtilities utilities;
};

// Every intervention that survives the lattice walk for the rows in
// `group_coverage`: utility > 0 and (with the gate on) p_value <= alpha,
// reached only through surviving sub-patterns. Candidates whose estimate is
// singular are dropped. Independent of the fairness mode.
std::vector<InterventionCandidate> MineInterventionLattice(
    const Dataset& dataset, const CausalDag& dag,
    const CoverageSet& group_coverage,
    const std::set<std::string>& mutable_attributes,
    const InterventionOptions& options);

// Highest-scoring survivor under `mode`, after the individual-fairness
// filter. Ties: higher utility, shorter intervention, pattern order.
std::optional<PrescriptionRule> PickBestIntervention(
    const Pattern& grouping, const CoverageSet& coverage,
    const std::vector<InterventionCandidate>& survivors,
    const FairnessMode& mode);

// MineInterventionLattice + PickBestIntervention for a single grouping,
// using the causally relevant mutable attributes of `dag`.
std::optional<PrescriptionRule> MineIntervention(
    const Dataset& dataset, const CausalDag& dag, const Pattern& grouping,
    const FairnessMode& mode, const InterventionOptions& options = {});

// Mutable, categorical attributes with a directed path to the outcome.
std::set<std::string> RelevantMutableAttributes(const Dataset& dataset,
                                                const CausalDag& dag);
std::set<std::string> RelevantImmutableAttributes(const Dataset& dataset,
                                                  const CausalDag& dag);

}  // namespace faircap

#endif  // FAIRCAP_INTERVENTION_MINER_H_

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

// End-to-end mining: frequent groupings, surviving interventions per
// grouping, per-mode candidate rules and greedy selection.

#ifndef FAIRCAP_PIPELINE_H_
#define FAIRCAP_PIPELINE_H_

#include <cstddef>
#include <vector>

#include "faircap/causal.h"
#include "faircap/data.h"
#include "faircap/grouping_miner.h"
#include "faircap/intervention_miner.h"
#include "faircap/selection_config.h"
#include "faircap/selector.h"

namespace faircap {

struct MiningOptions {
  double apriori_support = 0.1;
  size_t max_grouping_len = 3;
  InterventionOptions intervention;
  size_t jobs = 1;  // 0: one per hardware thread
};

struct MinedGrouping {
  GroupingCandidate grouping;
  std::vector<InterventionCandidate> survivors;
};

// The mode-independent part of the search. Groupings keep the Apriori
// order; a grouping without surviving interventions is still listed.
struct MinedSpace {
  double apriori_support = 0.0;
  std::vector<MinedGrouping> groupings;
};

// Validates the DAG, mines groupings over the causally relevant immutable
// attributes and runs the intervention lattice for each, in parallel over
// groupings. Output does not depend on `jobs`.
MinedSpace MineSpace(const Dataset& dataset, const CausalDag& dag,
                     const MiningOptions& options);

// One rule per grouping: its best intervention under the config's fairness
// mode. Under rule coverage the support threshold is raised to theta.
std::vector<PrescriptionRule> BuildCandidates(const MinedSpace& space,
                                              const Dataset& dataset,
                                              const SelectionConfig& config);

struct PipelineResult {
  std::vector<PrescriptionRule> candidates;
  SelectionResult selection;
};

PipelineResult RunPipeline(const Dataset& dataset, const CausalDag& dag,
                           const MiningOptions& mining,
                           const SelectionConfig& config);

}  // namespace faircap

#endif  // FAIRCAP_PIPELINE_H_

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

#include "faircap/pipeline.h"

#include <algorithm>
#include <optional>

#include "faircap/error.h"
#include "faircap/parallel.h"
#include "log.h"

namespace faircap {

MinedSpace MineSpace(const Dataset& dataset, const CausalDag& dag,
                     const MiningOptions& options) {
  ValidateDag(dag, dataset.schema());
  MinedSpace space;
  space.apriori_support = options.apriori_support;
  auto groupings =
      MineGroupingPatterns(dataset, RelevantImmutableAttributes(dataset, dag),
                           options.apriori_support, options.max_grouping_len);
  const auto mutables = RelevantMutableAttributes(dataset, dag);
  internal::Log().info("mined {} grouping patterns over {} rows", groupings.size(),
               dataset.num_rows());

  auto survivors = ParallelMap(groupings.size(), options.jobs, [&](size_t i) {
    return MineInterventionLattice(dataset, dag, groupings[i].coverage,
                                   mutables, options.intervention);
  });
  space.groupings.reserve(groupings.size());
  for (size_t i = 0; i < groupings.size(); ++i) {
    space.groupings.push_back(
        {std::move(groupings[i]), std::move(survivors[i])});
  }
  return space;
}

std::vector<PrescriptionRule> BuildCandidates(const MinedSpace& space,
                                              const Dataset& dataset,
                                              const SelectionConfig& config) {
  double support = space.apriori_support;
  if (config.coverage.variant == CoverageVariant::kRule) {
    support = std::max(support, config.coverage.theta);
  }
  const size_t min_count = MinSupportCount(support, dataset.num_rows());
  std::vector<PrescriptionRule> out;
  for (const MinedGrouping& g : space.groupings) {
    if (g.grouping.coverage.count < min_count) continue;
    std::optional<PrescriptionRule> rule =
        PickBestIntervention(g.grouping.pattern, g.grouping.coverage,
                             g.survivors, config.fairness);
    if (rule) out.push_back(std::move(*rule));
  }
  return out;
}

PipelineResult RunPipeline(const Dataset& dataset, const CausalDag& dag,
                           const MiningOptions& mining,
                           const SelectionConfig& config) {
  config.Validate();
  if (config.fairness.variant != FairnessVariant::kNone &&
      dataset.num_protected() == 0) {
    throw Error(ErrorCode::kEmptyProtectedGroup,
                "protected pattern covers no row");
  }
  const MinedSpace space = MineSpace(dataset, dag, mining);
  PipelineResult result;
  result.candidates = BuildCandidates(space, dataset, config);
  internal::Log().info("{} candidate rules", result.candidates.size());
  result.selection = GreedySelect(result.candidates, dataset, config);
  return result;
}

}  // namespace faircap

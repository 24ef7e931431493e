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

#ifndef FAIRCAP_GROUPING_MINER_H_
#define FAIRCAP_GROUPING_MINER_H_

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "faircap/data.h"

namespace faircap {

struct GroupingCandidate {
  Pattern pattern;   // equality predicates over immutable attributes
  double support = 0.0;
  CoverageSet coverage;
};

// Smallest row count whose fraction of `num_rows` reaches `support`.
size_t MinSupportCount(double support, size_t num_rows);

// Apriori over equality items (attribute = value) of the categorical
// attributes in `relevant_attributes`. Returns every conjunction of 1 to
// `max_len` items on distinct attributes with support >= `apriori_support`,
// sorted by descending support then pattern order. Throws kNoPatterns when
// no single item is frequent, kInvalidConfig for support outside (0, 1].
std::vector<GroupingCandidate> MineGroupingPatterns(
    const Dataset& dataset, const std::set<std::string>& relevant_attributes,
    double apriori_support, size_t max_len);

}  // namespace faircap

#endif  // FAIRCAP_GROUPING_MINER_H_

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

// Causal DAG handling and conditional average treatment effect estimation.
//
// CATE is estimated by backdoor adjustment with a linear model: within the
// conditioning subgroup, the outcome is regressed on an intercept, a
// treatment indicator and a one-hot encoding of every adjustment attribute.
// The treatment coefficient is the estimate.

#ifndef FAIRCAP_CAUSAL_H_
#define FAIRCAP_CAUSAL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "faircap/data.h"

namespace faircap {

struct CausalDag {
  std::set<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;

  // Adds both endpoints as nodes.
  void AddEdge(const std::string& from, const std::string& to);
  std::set<std::string> Parents(const std::string& node) const;
  std::set<std::string> Children(const std::string& node) const;
  std::set<std::string> Descendants(const std::string& node) const;

  bool operator==(const CausalDag&) const = default;
};

// Returns a topological order. Throws kUnknownNode for nodes outside the
// schema and kCyclicGraph (message names one cycle) for cycles or
// self-loops.
std::vector<std::string> ValidateDag(const CausalDag& dag,
                                     const Schema& schema);

// Attributes with a directed path to `outcome`.
std::set<std::string> CausallyRelevantAttributes(const CausalDag& dag,
                                                 const std::string& outcome);

// Union of the DAG parents of the treatment attributes, minus the
// treatments, their descendants and the outcome.
std::set<std::string> AdjustmentSet(const CausalDag& dag,
                                    const std::set<std::string>& treatments,
                                    const std::string& outcome);

enum class SimplifiedDagKind { kOneLayerIndep, kTwoLayerMutable, kTwoLayer };

CausalDag GenerateSimplifiedDag(SimplifiedDagKind kind, const Schema& schema);

struct CateOptions {
  // Minimum treated and control rows (positivity).
  size_t min_group_size = 10;
};

struct CateEstimate {
  double point = 0.0;
  double std_err = 0.0;
  double p_value = 1.0;
  size_t n_treated = 0;
  size_t n_control = 0;
  std::set<std::string> adjustment_set;
};

struct BaseFit;

// Estimates CATEs for many interventions over one fixed row subset. The
// intercept + confounder part of the normal equations is factored once per
// distinct adjustment set and reused, so each further intervention costs a
// pass over its treated rows. Not thread-safe; use one per worker.
class SubgroupEstimator {
 public:
  SubgroupEstimator(const Dataset& dataset, std::vector<uint32_t> rows,
                    CateOptions options = {});
  ~SubgroupEstimator();
  SubgroupEstimator(SubgroupEstimator&&) noexcept;
  SubgroupEstimator& operator=(SubgroupEstimator&&) noexcept;

  size_t size() const { return rows_.size(); }
  std::span<const uint32_t> rows() const { return rows_; }

  // Rows matching every intervention predicate are treated; all others,
  // including partial matches, are control. Throws kPositivityViolation
  // and kSingularDesign.
  CateEstimate Estimate(const Pattern& intervention,
                        const std::set<std::string>& adjustment_set);

 private:
  const BaseFit& Base(const std::vector<size_t>& columns);

  const Dataset* dataset_;
  std::vector<uint32_t> rows_;
  CateOptions options_;
  double outcome_mean_ = 0.0;
  std::map<std::vector<size_t>, std::unique_ptr<BaseFit>> cache_;
};

// CATE of `intervention` on the outcome within Coverage(group), adjusting
// for AdjustmentSet(dag, attributes of intervention).
CateEstimate EstimateCate(const Dataset& dataset, const Pattern& group,
                          const Pattern& intervention, const CausalDag& dag,
                          const CateOptions& options = {});

}  // namespace faircap

#endif  // FAIRCAP_CAUSAL_H_

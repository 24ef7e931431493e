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

#include "faircap/intervention_miner.h"

#include <algorithm>
#include <functional>
#include <map>
#include <utility>

#include "faircap/error.h"

namespace faircap {
namespace {

std::set<std::string> AttributeSet(const Pattern& pattern) {
  const auto names = pattern.Attributes();
  return {names.begin(), names.end()};
}

// Utility of one part of the group: positivity failures count as zero.
double PartUtility(SubgroupEstimator& estimator, const Pattern& intervention,
                   const std::set<std::string>& adjustment) {
  if (estimator.size() == 0) return 0.0;
  try {
    return estimator.Estimate(intervention, adjustment).point;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kPositivityViolation) return 0.0;
    throw;
  }
}

// Survivor ordering under a mode: score, utility, shorter, pattern order.
bool Better(double score_a, const InterventionCandidate& a, double score_b,
            const InterventionCandidate& b) {
  if (score_a != score_b) return score_a > score_b;
  if (a.utilities.utility != b.utilities.utility) {
    return a.utilities.utility > b.utilities.utility;
  }
  if (a.intervention.size() != b.intervention.size()) {
    return a.intervention.size() < b.intervention.size();
  }
  return a.intervention < b.intervention;
}

class LatticeEvaluator {
 public:
  LatticeEvaluator(const Dataset& dataset, const CausalDag& dag,
                   const CoverageSet& coverage,
                   const InterventionOptions& options)
      : dag_(dag),
        outcome_(dataset.schema().outcome_name()),
        options_(options),
        all_(dataset, coverage.row_ids, options.cate),
        protected_(dataset, ProtectedRows(coverage, dataset), options.cate),
        nonprotected_(dataset, NonProtectedRows(coverage, dataset),
                      options.cate) {}

  // Utilities of a surviving node, or nullopt when the node is pruned.
  std::optional<RuleUtilities> Evaluate(const Pattern& intervention) {
    const auto adjustment =
        AdjustmentSet(dag_, AttributeSet(intervention), outcome_);
    RuleUtilities u;
    try {
      const CateEstimate overall = all_.Estimate(intervention, adjustment);
      if (!(overall.point > 0.0)) return std::nullopt;
      if (options_.significance_gate && overall.p_value > options_.alpha) {
        return std::nullopt;
      }
      u.utility = overall.point;
      u.p_value = overall.p_value;
      u.utility_p = PartUtility(protected_, intervention, adjustment);
      u.utility_np = PartUtility(nonprotected_, intervention, adjustment);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kPositivityViolation ||
          e.code() == ErrorCode::kSingularDesign) {
        return std::nullopt;
      }
      throw;
    }
    return u;
  }

 private:
  const CausalDag& dag_;
  std::string outcome_;
  const InterventionOptions& options_;
  SubgroupEstimator all_;
  SubgroupEstimator protected_;
  SubgroupEstimator nonprotected_;
};

}  // namespace

RuleUtilities ComputeRuleUtilities(const Dataset& dataset,
                                   const CausalDag& dag,
                                   const Pattern& grouping,
                                   const Pattern& intervention,
                                   const CateOptions& options) {
  RuleUtilities u;
  const CoverageSet coverage = Coverage(grouping, dataset);
  if (coverage.count == 0) return u;
  const auto adjustment = AdjustmentSet(dag, AttributeSet(intervention),
                                        dataset.schema().outcome_name());
  SubgroupEstimator all(dataset, coverage.row_ids, options);
  try {
    const CateEstimate overall = all.Estimate(intervention, adjustment);
    u.utility = overall.point;
    u.p_value = overall.p_value;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPositivityViolation) throw;
  }
  SubgroupEstimator prot(dataset, ProtectedRows(coverage, dataset), options);
  SubgroupEstimator nonprot(dataset, NonProtectedRows(coverage, dataset),
                            options);
  u.utility_p = PartUtility(prot, intervention, adjustment);
  u.utility_np = PartUtility(nonprot, intervention, adjustment);
  return u;
}

double BenefitSp(double utility, double utility_p, double utility_np) {
  if (utility_np >= utility_p) {
    return utility / (1.0 + utility_np - utility_p);
  }
  return utility;
}

double BenefitBgl(double utility, double utility_p, double tau) {
  if (tau >= utility_p) return utility / (1.0 + tau - utility_p);
  return utility;
}

double BenefitSp(const PrescriptionRule& rule) {
  return BenefitSp(rule.utility, rule.utility_p, rule.utility_np);
}

double BenefitBgl(const PrescriptionRule& rule, double tau) {
  return BenefitBgl(rule.utility, rule.utility_p, tau);
}

double ModeBenefit(const RuleUtilities& u, const FairnessMode& mode) {
  if (mode.is_sp()) return BenefitSp(u.utility, u.utility_p, u.utility_np);
  if (mode.is_bgl()) return BenefitBgl(u.utility, u.utility_p, mode.tau);
  return u.utility;
}

bool SatisfiesIndividualFairness(double utility_p, double utility_np,
                                 const FairnessMode& mode) {
  switch (mode.variant) {
    case FairnessVariant::kSpIndividual:
      return std::abs(utility_p - utility_np) <= mode.epsilon;
    case FairnessVariant::kBglIndividual:
      return utility_p >= mode.tau;
    default:
      return true;
  }
}

std::vector<InterventionCandidate> MineInterventionLattice(
    const Dataset& dataset, const CausalDag& dag,
    const CoverageSet& group_coverage,
    const std::set<std::string>& mutable_attributes,
    const InterventionOptions& options) {
  std::vector<InterventionCandidate> survivors;
  if (group_coverage.count == 0 || options.max_len == 0) return survivors;
  const Schema& schema = dataset.schema();
  const size_t min_size = std::max<size_t>(1, options.cate.min_group_size);

  // Items whose treated and control sides both clear positivity.
  std::vector<Predicate> items;
  for (const std::string& name : mutable_attributes) {
    const size_t column = schema.IndexOf(name);
    const AttributeSpec& spec = schema.attribute(column);
    if (!spec.is_categorical()) continue;
    std::vector<size_t> counts(spec.labels().size(), 0);
    for (uint32_t r : group_coverage.row_ids) {
      ++counts[static_cast<size_t>(dataset.cell(r, column))];
    }
    for (size_t code = 0; code < counts.size(); ++code) {
      if (counts[code] >= min_size &&
          group_coverage.count - counts[code] >= min_size) {
        items.push_back({name, Op::kEq, static_cast<double>(code)});
      }
    }
  }
  std::sort(items.begin(), items.end());

  LatticeEvaluator evaluator(dataset, dag, group_coverage, options);

  if (options.exhaustive) {
    std::vector<Predicate> chosen;
    std::function<void(size_t)> extend = [&](size_t start) {
      if (!chosen.empty()) {
        Pattern pattern(chosen);
        if (auto u = evaluator.Evaluate(pattern)) {
          survivors.push_back({std::move(pattern), *u});
        }
      }
      if (chosen.size() == options.max_len) return;
      for (size_t i = start; i < items.size(); ++i) {
        bool clash = false;
        for (const Predicate& p : chosen) clash |= p.attribute == items[i].attribute;
        if (clash) continue;
        chosen.push_back(items[i]);
        extend(i + 1);
        chosen.pop_back();
      }
    };
    extend(0);
    return survivors;
  }

  std::vector<Pattern> level;
  for (const Predicate& item : items) {
    Pattern pattern({item});
    if (auto u = evaluator.Evaluate(pattern)) {
      survivors.push_back({pattern, *u});
      level.push_back(std::move(pattern));
    }
  }

  for (size_t k = 1; k < options.max_len && level.size() > 1; ++k) {
    std::sort(level.begin(), level.end());
    const std::set<Pattern> alive(level.begin(), level.end());
    std::vector<Pattern> next;
    for (size_t i = 0; i < level.size(); ++i) {
      for (size_t j = i + 1; j < level.size(); ++j) {
        const auto& a = level[i].predicates();
        const auto& b = level[j].predicates();
        if (!std::equal(a.begin(), a.end() - 1, b.begin())) break;
        if (a.back().attribute == b.back().attribute) continue;
        Pattern joined = level[i].With(b.back());
        bool parents_alive = true;
        for (size_t drop = 0; drop < joined.size() && parents_alive; ++drop) {
          std::vector<Predicate> parent;
          for (size_t m = 0; m < joined.size(); ++m) {
            if (m != drop) parent.push_back(joined.predicates()[m]);
          }
          parents_alive = alive.count(Pattern(std::move(parent))) > 0;
        }
        if (!parents_alive) continue;
        if (auto u = evaluator.Evaluate(joined)) {
          survivors.push_back({joined, *u});
          next.push_back(std::move(joined));
        }
      }
    }
    level = std::move(next);
  }
  return survivors;
}

std::optional<PrescriptionRule> PickBestIntervention(
    const Pattern& grouping, const CoverageSet& coverage,
    const std::vector<InterventionCandidate>& survivors,
    const FairnessMode& mode) {
  const InterventionCandidate* best = nullptr;
  double best_score = 0.0;
  for (const InterventionCandidate& c : survivors) {
    if (!SatisfiesIndividualFairness(c.utilities.utility_p,
                                     c.utilities.utility_np, mode)) {
      continue;
    }
    const double score = ModeBenefit(c.utilities, mode);
    if (best == nullptr || Better(score, c, best_score, *best)) {
      best = &c;
      best_score = score;
    }
  }
  if (best == nullptr) return std::nullopt;
  PrescriptionRule rule;
  rule.grouping = grouping;
  rule.intervention = best->intervention;
  rule.utility = best->utilities.utility;
  rule.utility_p = best->utilities.utility_p;
  rule.utility_np = best->utilities.utility_np;
  rule.p_value = best->utilities.p_value;
  rule.coverage = coverage;
  rule.benefit = best_score;
  return rule;
}

std::set<std::string> RelevantMutableAttributes(const Dataset& dataset,
                                                const CausalDag& dag) {
  const Schema& schema = dataset.schema();
  const auto relevant = CausallyRelevantAttributes(dag, schema.outcome_name());
  std::set<std::string> out;
  for (size_t m : schema.IndicesWithRole(Role::kMutable)) {
    const AttributeSpec& spec = schema.attribute(m);
    if (spec.is_categorical() && relevant.count(spec.name)) out.insert(spec.name);
  }
  return out;
}

std::set<std::string> RelevantImmutableAttributes(const Dataset& dataset,
                                                  const CausalDag& dag) {
  const Schema& schema = dataset.schema();
  const auto relevant = CausallyRelevantAttributes(dag, schema.outcome_name());
  std::set<std::string> out;
  for (size_t i : schema.IndicesWithRole(Role::kImmutable)) {
    const AttributeSpec& spec = schema.attribute(i);
    if (spec.is_categorical() && relevant.count(spec.name)) out.insert(spec.name);
  }
  return out;
}

std::optional<PrescriptionRule> MineIntervention(
    const Dataset& dataset, const CausalDag& dag, const Pattern& grouping,
    const FairnessMode& mode, const InterventionOptions& options) {
  const CoverageSet coverage = Coverage(grouping, dataset);
  const auto survivors = MineInterventionLattice(
      dataset, dag, coverage, RelevantMutableAttributes(dataset, dag), options);
  return PickBestIntervention(grouping, coverage, survivors, mode);
}

}  // namespace faircap

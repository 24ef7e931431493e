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

#include "faircap/selector.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "faircap/error.h"

namespace faircap {
namespace {

// Per-row best (max) and worst (min) utility over the covering rules.
struct RowAggregate {
  std::vector<double> best;
  std::vector<double> worst;
  std::vector<uint8_t> covered;
};

RowAggregate Aggregate(std::span<const PrescriptionRule> rules, size_t n) {
  RowAggregate agg;
  agg.best.assign(n, 0.0);
  agg.worst.assign(n, 0.0);
  agg.covered.assign(n, 0);
  for (const PrescriptionRule& rule : rules) {
    for (uint32_t r : rule.coverage.row_ids) {
      if (!agg.covered[r]) {
        agg.covered[r] = 1;
        agg.best[r] = rule.utility;
        agg.worst[r] = rule.utility;
      } else {
        agg.best[r] = std::max(agg.best[r], rule.utility);
        agg.worst[r] = std::min(agg.worst[r], rule.utility);
      }
    }
  }
  return agg;
}

struct GroupSums {
  double exp_utility = 0.0;
  double exp_utility_p = 0.0;
  double exp_utility_np = 0.0;
  size_t covered = 0;
  size_t covered_p = 0;
};

GroupSums Summarize(std::span<const PrescriptionRule> rules,
                    const Dataset& dataset, ExpUtilityDenominator denominator) {
  const size_t n = dataset.num_rows();
  const RowAggregate agg = Aggregate(rules, n);
  GroupSums sums;
  double all = 0.0, prot = 0.0, nonprot = 0.0;
  size_t covered_np = 0;
  for (size_t r = 0; r < n; ++r) {
    if (!agg.covered[r]) continue;
    ++sums.covered;
    all += agg.best[r];
    if (dataset.is_protected(r)) {
      ++sums.covered_p;
      prot += agg.worst[r];
    } else {
      ++covered_np;
      nonprot += agg.best[r];
    }
  }
  const bool total = denominator == ExpUtilityDenominator::kTotal;
  const size_t n_p = total ? dataset.num_protected() : sums.covered_p;
  const size_t n_np = total ? dataset.num_nonprotected() : covered_np;
  sums.exp_utility = all / static_cast<double>(n);
  sums.exp_utility_p = n_p == 0 ? 0.0 : prot / static_cast<double>(n_p);
  sums.exp_utility_np = n_np == 0 ? 0.0 : nonprot / static_cast<double>(n_np);
  return sums;
}

std::string RuleKey(const PrescriptionRule& rule, const Schema& schema) {
  return FormatPattern(rule.grouping, schema) + " => " +
         FormatPattern(rule.intervention, schema);
}

bool LexLess(const std::vector<size_t>& a, const std::vector<size_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void FinishResult(SelectionResult& result,
                  const std::vector<PrescriptionRule>& candidates,
                  const Dataset& dataset, const SelectionConfig& config) {
  result.rules.clear();
  for (size_t i : result.selected) result.rules.push_back(candidates[i]);
  result.metrics = ComputeMetrics(result.rules, dataset, config.denominator);
  result.objective =
      Objective(result.rules, candidates.size(), dataset, config);
  result.violations = CheckConstraints(result.rules, dataset, config);
}

}  // namespace

double ExpUtility(std::span<const PrescriptionRule> rules,
                  const Dataset& dataset) {
  return Summarize(rules, dataset, ExpUtilityDenominator::kCovered).exp_utility;
}

double ExpUtilityProtected(std::span<const PrescriptionRule> rules,
                           const Dataset& dataset,
                           ExpUtilityDenominator denominator) {
  return Summarize(rules, dataset, denominator).exp_utility_p;
}

double ExpUtilityNonProtected(std::span<const PrescriptionRule> rules,
                              const Dataset& dataset,
                              ExpUtilityDenominator denominator) {
  return Summarize(rules, dataset, denominator).exp_utility_np;
}

RulesetMetrics ComputeMetrics(std::span<const PrescriptionRule> rules,
                              const Dataset& dataset,
                              ExpUtilityDenominator denominator) {
  const GroupSums sums = Summarize(rules, dataset, denominator);
  RulesetMetrics m;
  m.size = rules.size();
  m.coverage_frac = static_cast<double>(sums.covered) /
                    static_cast<double>(dataset.num_rows());
  m.coverage_p_frac =
      dataset.num_protected() == 0
          ? 0.0
          : static_cast<double>(sums.covered_p) /
                static_cast<double>(dataset.num_protected());
  m.exp_utility = sums.exp_utility;
  m.exp_utility_p = sums.exp_utility_p;
  m.exp_utility_np = sums.exp_utility_np;
  m.unfairness = m.exp_utility_np - m.exp_utility_p;
  return m;
}

std::vector<Violation> CheckConstraints(std::span<const PrescriptionRule> rules,
                                        const Dataset& dataset,
                                        const SelectionConfig& config) {
  const FairnessMode& fairness = config.fairness;
  const CoverageMode& coverage = config.coverage;
  if (fairness.variant != FairnessVariant::kNone &&
      dataset.num_protected() == 0) {
    throw Error(ErrorCode::kEmptyProtectedGroup,
                "protected pattern covers no row");
  }
  std::vector<Violation> out;
  const double n = static_cast<double>(dataset.num_rows());
  const double n_p = static_cast<double>(dataset.num_protected());

  if (coverage.variant == CoverageVariant::kGroup) {
    const GroupSums sums = Summarize(rules, dataset, config.denominator);
    if (static_cast<double>(sums.covered) < coverage.theta * n) {
      out.push_back({"group_coverage", static_cast<double>(sums.covered),
                     coverage.theta * n, "covered rows"});
    }
    if (static_cast<double>(sums.covered_p) < coverage.theta_p * n_p) {
      out.push_back({"group_coverage_protected",
                     static_cast<double>(sums.covered_p),
                     coverage.theta_p * n_p, "covered protected rows"});
    }
  } else if (coverage.variant == CoverageVariant::kRule) {
    for (size_t i = 0; i < rules.size(); ++i) {
      const CoverageSet& c = rules[i].coverage;
      if (static_cast<double>(c.count) < coverage.theta * n) {
        out.push_back({"rule_coverage", static_cast<double>(c.count),
                       coverage.theta * n, "rule " + std::to_string(i)});
      }
      if (static_cast<double>(c.protected_count) < coverage.theta_p * n_p) {
        out.push_back({"rule_coverage_protected",
                       static_cast<double>(c.protected_count),
                       coverage.theta_p * n_p, "rule " + std::to_string(i)});
      }
    }
  }

  switch (fairness.variant) {
    case FairnessVariant::kNone:
      break;
    case FairnessVariant::kSpGroup: {
      const GroupSums sums = Summarize(rules, dataset, config.denominator);
      const double gap = std::abs(sums.exp_utility_p - sums.exp_utility_np);
      if (!(gap <= fairness.epsilon)) {
        out.push_back({"sp_group", gap, fairness.epsilon,
                       "|ExpUtility_p - ExpUtility_np|"});
      }
      break;
    }
    case FairnessVariant::kSpIndividual:
      for (size_t i = 0; i < rules.size(); ++i) {
        const double gap = std::abs(rules[i].utility_p - rules[i].utility_np);
        if (!(gap <= fairness.epsilon)) {
          out.push_back({"sp_individual", gap, fairness.epsilon,
                         "rule " + std::to_string(i)});
        }
      }
      break;
    case FairnessVariant::kBglGroup: {
      const GroupSums sums = Summarize(rules, dataset, config.denominator);
      if (!(sums.exp_utility_p >= fairness.tau)) {
        out.push_back({"bgl_group", sums.exp_utility_p, fairness.tau,
                       "ExpUtility_p"});
      }
      break;
    }
    case FairnessVariant::kBglIndividual:
      for (size_t i = 0; i < rules.size(); ++i) {
        if (!(rules[i].utility_p >= fairness.tau)) {
          out.push_back({"bgl_individual", rules[i].utility_p, fairness.tau,
                         "rule " + std::to_string(i)});
        }
      }
      break;
  }
  return out;
}

bool SatisfiesPerRuleConstraints(const PrescriptionRule& rule,
                                 const Dataset& dataset,
                                 const SelectionConfig& config) {
  if (config.coverage.variant == CoverageVariant::kRule) {
    const double n = static_cast<double>(dataset.num_rows());
    const double n_p = static_cast<double>(dataset.num_protected());
    if (static_cast<double>(rule.coverage.count) < config.coverage.theta * n) {
      return false;
    }
    if (static_cast<double>(rule.coverage.protected_count) <
        config.coverage.theta_p * n_p) {
      return false;
    }
  }
  return SatisfiesIndividualFairness(rule.utility_p, rule.utility_np,
                                     config.fairness);
}

double Objective(std::span<const PrescriptionRule> rules, size_t num_candidates,
                 const Dataset& dataset, const SelectionConfig& config) {
  const double size_term =
      static_cast<double>(num_candidates) - static_cast<double>(rules.size());
  const double utility_term =
      config.lambda2 == 0.0 ? 0.0 : ExpUtility(rules, dataset);
  return config.lambda1 * size_term + config.lambda2 * utility_term;
}

SelectionResult GreedySelect(const std::vector<PrescriptionRule>& candidates,
                             const Dataset& dataset,
                             const SelectionConfig& config) {
  config.Validate();
  if (config.fairness.variant != FairnessVariant::kNone &&
      dataset.num_protected() == 0) {
    throw Error(ErrorCode::kEmptyProtectedGroup,
                "protected pattern covers no row");
  }
  const Schema& schema = dataset.schema();
  const size_t n = dataset.num_rows();
  const size_t n_p = dataset.num_protected();
  const bool group_coverage =
      config.coverage.variant == CoverageVariant::kGroup;

  std::vector<size_t> pool;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (SatisfiesPerRuleConstraints(candidates[i], dataset, config)) {
      pool.push_back(i);
    }
  }
  std::vector<std::string> keys(candidates.size());
  double max_benefit = 0.0, max_utility = 0.0;
  for (size_t i : pool) {
    keys[i] = RuleKey(candidates[i], schema);
    max_benefit = std::max(max_benefit, candidates[i].benefit);
    max_utility = std::max(max_utility, candidates[i].utility);
  }
  if (!(max_benefit > 0.0)) max_benefit = 1.0;
  if (!(max_utility > 0.0)) max_utility = 1.0;

  // The fairness clause alone, for tentative sets.
  SelectionConfig fairness_only = config;
  fairness_only.coverage = CoverageMode{};

  SelectionResult result;
  std::vector<double> best(n, 0.0);
  std::vector<uint8_t> covered(n, 0);
  size_t covered_count = 0, covered_p = 0;
  std::vector<uint8_t> used(candidates.size(), 0);

  struct Scored {
    size_t index;
    double score, cov, ben, util;
    bool adds_coverage;
  };

  for (size_t iteration = 0; result.selected.size() < config.max_rules;
       ++iteration) {
    const bool need_total =
        group_coverage && static_cast<double>(covered_count) <
                              config.coverage.theta * static_cast<double>(n);
    const bool need_p =
        group_coverage && static_cast<double>(covered_p) <
                              config.coverage.theta_p * static_cast<double>(n_p);
    const bool coverage_met = !need_total && !need_p;

    std::vector<Scored> scored;
    for (size_t i : pool) {
      if (used[i]) continue;
      const PrescriptionRule& rule = candidates[i];
      size_t fresh = 0, fresh_p = 0;
      double gain = 0.0;
      for (uint32_t r : rule.coverage.row_ids) {
        if (!covered[r]) {
          ++fresh;
          if (dataset.is_protected(r)) ++fresh_p;
          gain += std::max(0.0, rule.utility);
        } else if (rule.utility > best[r]) {
          gain += rule.utility - best[r];
        }
      }
      Scored s{i, 0.0, 0.0, 0.0, 0.0, false};
      if (!coverage_met) {
        double terms = 0.0;
        int count = 0;
        if (need_total) {
          terms += static_cast<double>(fresh) / static_cast<double>(n);
          ++count;
          s.adds_coverage |= fresh > 0;
        }
        if (need_p && n_p > 0) {
          terms += static_cast<double>(fresh_p) / static_cast<double>(n_p);
          ++count;
          s.adds_coverage |= fresh_p > 0;
        }
        s.cov = count == 0 ? 0.0 : terms / count;
      }
      s.ben = rule.benefit / max_benefit;
      s.util = gain / static_cast<double>(n) / max_utility;
      s.score = config.weights.coverage * s.cov +
                config.weights.benefit * s.ben +
                config.weights.utility * s.util;
      scored.push_back(s);
    }
    if (scored.empty()) break;
    std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
      if (a.score != b.score) return a.score > b.score;
      const PrescriptionRule& ra = candidates[a.index];
      const PrescriptionRule& rb = candidates[b.index];
      if (ra.utility != rb.utility) return ra.utility > rb.utility;
      if (ra.coverage.count != rb.coverage.count) {
        return ra.coverage.count > rb.coverage.count;
      }
      if (keys[a.index] != keys[b.index]) return keys[a.index] < keys[b.index];
      return a.index < b.index;
    });

    const Scored* pick = nullptr;
    const Scored* fallback = nullptr;
    std::vector<PrescriptionRule> tentative;
    if (config.fairness.is_group()) {
      for (size_t i : result.selected) tentative.push_back(candidates[i]);
    }
    for (const Scored& s : scored) {
      if (s.score < config.stop_threshold) break;
      if (config.fairness.is_group()) {
        tentative.push_back(candidates[s.index]);
        const bool fair =
            CheckConstraints(tentative, dataset, fairness_only).empty();
        tentative.pop_back();
        if (!fair) {
          if (!coverage_met && s.adds_coverage && fallback == nullptr) {
            fallback = &s;
          }
          continue;
        }
      }
      pick = &s;
      break;
    }
    if (pick == nullptr) pick = fallback;
    if (pick == nullptr) break;

    const PrescriptionRule& rule = candidates[pick->index];
    used[pick->index] = 1;
    result.selected.push_back(pick->index);
    for (uint32_t r : rule.coverage.row_ids) {
      if (!covered[r]) {
        covered[r] = 1;
        ++covered_count;
        if (dataset.is_protected(r)) ++covered_p;
        best[r] = rule.utility;
      } else {
        best[r] = std::max(best[r], rule.utility);
      }
    }
    TraceStep step;
    step.iteration = iteration;
    step.candidate = pick->index;
    step.score = pick->score;
    step.coverage_term = pick->cov;
    step.benefit_term = pick->ben;
    step.utility_term = pick->util;
    step.coverage_met = coverage_met;
    double total = 0.0;
    for (size_t r = 0; r < n; ++r) total += covered[r] ? best[r] : 0.0;
    step.exp_utility = total / static_cast<double>(n);
    result.trace.push_back(step);
  }

  FinishResult(result, candidates, dataset, config);
  return result;
}

SelectionResult BruteForceSelect(const std::vector<PrescriptionRule>& candidates,
                                 const Dataset& dataset,
                                 const SelectionConfig& config) {
  config.Validate();
  const size_t l = candidates.size();
  if (l > kMaxBruteForceCandidates) {
    throw Error(ErrorCode::kTooManyCandidates,
                std::to_string(l) + " candidates, limit " +
                    std::to_string(kMaxBruteForceCandidates));
  }
  bool found = false;
  double best_objective = 0.0;
  std::vector<size_t> best_subset;
  std::vector<PrescriptionRule> subset;
  std::vector<size_t> indices;
  for (uint64_t mask = 0; mask < (uint64_t{1} << l); ++mask) {
    subset.clear();
    indices.clear();
    for (size_t i = 0; i < l; ++i) {
      if (mask >> i & 1) {
        subset.push_back(candidates[i]);
        indices.push_back(i);
      }
    }
    if (!CheckConstraints(subset, dataset, config).empty()) continue;
    const double objective = Objective(subset, l, dataset, config);
    bool better = !found || objective > best_objective;
    if (found && objective == best_objective) {
      better = indices.size() < best_subset.size() ||
               (indices.size() == best_subset.size() &&
                LexLess(indices, best_subset));
    }
    if (better) {
      found = true;
      best_objective = objective;
      best_subset = indices;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kInfeasible, "no subset satisfies the constraints");
  }
  SelectionResult result;
  result.selected = best_subset;
  FinishResult(result, candidates, dataset, config);
  return result;
}

}  // namespace faircap

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

// Shared fixtures and brute-force oracles for the tests.

#ifndef FAIRCAP_TESTS_TEST_UTIL_H_
#define FAIRCAP_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "faircap/causal.h"
#include "faircap/data.h"
#include "faircap/intervention_miner.h"
#include "faircap/selector.h"

namespace faircap::testing {

inline AttributeSpec Cat(const std::string& name, Role role,
                         std::vector<std::string> labels) {
  return {name, role, CategoricalDomain{std::move(labels)}};
}

inline AttributeSpec Num(const std::string& name, Role role, double lo = 0.0,
                         double hi = 1.0) {
  return {name, role, NumericDomain{lo, hi}};
}

inline std::vector<std::string> Labels(const std::string& prefix, size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Rows are split into protected (P = yes) and not. G has 64 labels so
// synthetic rules can carry distinct grouping patterns; rule coverage sets
// are drawn independently of those patterns.
inline Dataset SelectorDataset(size_t n, double protected_fraction,
                               std::mt19937_64& rng) {
  Schema schema({Cat("P", Role::kImmutable, {"no", "yes"}),
                 Cat("G", Role::kImmutable, Labels("g", 64)),
                 Cat("M", Role::kMutable, {"a", "b"}),
                 Num("O", Role::kOutcome)});
  std::bernoulli_distribution prot(protected_fraction);
  std::vector<std::vector<double>> cols(4, std::vector<double>(n, 0.0));
  for (size_t r = 0; r < n; ++r) cols[0][r] = prot(rng) ? 1.0 : 0.0;
  return Dataset(std::move(schema), std::move(cols),
                 Pattern({Predicate{"P", Op::kEq, 1.0}}));
}

inline CoverageSet MakeCoverage(std::vector<uint32_t> rows,
                                const Dataset& dataset) {
  CoverageSet c;
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  c.row_ids = std::move(rows);
  c.count = c.row_ids.size();
  for (uint32_t r : c.row_ids) c.protected_count += dataset.is_protected(r);
  return c;
}

struct RuleGenOptions {
  double min_inclusion = 0.05;
  double max_inclusion = 0.6;
  double max_utility = 10.0;
};

inline std::vector<PrescriptionRule> RandomRules(
    const Dataset& dataset, size_t count, std::mt19937_64& rng,
    const RuleGenOptions& options = {}) {
  std::uniform_real_distribution<double> inclusion(options.min_inclusion,
                                                   options.max_inclusion);
  std::uniform_real_distribution<double> utility(0.05, options.max_utility);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PrescriptionRule> rules;
  for (size_t i = 0; i < count; ++i) {
    const double q = inclusion(rng);
    std::vector<uint32_t> rows;
    for (size_t r = 0; r < dataset.num_rows(); ++r) {
      if (unit(rng) < q) rows.push_back(static_cast<uint32_t>(r));
    }
    PrescriptionRule rule;
    rule.grouping = Pattern({Predicate{"G", Op::kEq, static_cast<double>(i % 64)}});
    rule.intervention = Pattern({Predicate{"M", Op::kEq, 1.0}});
    rule.coverage = MakeCoverage(std::move(rows), dataset);
    rule.utility = utility(rng);
    rule.utility_p = rule.coverage.protected_count ? utility(rng) : 0.0;
    rule.utility_np =
        rule.coverage.count > rule.coverage.protected_count ? utility(rng) : 0.0;
    rule.p_value = 0.001;
    rule.benefit = BenefitSp(rule);
    rules.push_back(std::move(rule));
  }
  return rules;
}

inline bool Covers(const PrescriptionRule& rule, uint32_t row) {
  return std::binary_search(rule.coverage.row_ids.begin(),
                            rule.coverage.row_ids.end(), row);
}

// Per-row definitional oracle for the three expected utilities.
struct ExpUtilities {
  double all = 0.0;
  double p = 0.0;
  double np = 0.0;
};

inline ExpUtilities OracleExpUtilities(const std::vector<PrescriptionRule>& rules,
                                       const Dataset& dataset,
                                       bool total_denominator = false) {
  double all = 0.0, p = 0.0, np = 0.0;
  size_t n_p = 0, n_np = 0;
  for (uint32_t r = 0; r < dataset.num_rows(); ++r) {
    bool covered = false;
    double hi = -1e300, lo = 1e300;
    for (const PrescriptionRule& rule : rules) {
      if (!Covers(rule, r)) continue;
      covered = true;
      hi = std::max(hi, rule.utility);
      lo = std::min(lo, rule.utility);
    }
    if (!covered) continue;
    all += hi;
    if (dataset.is_protected(r)) {
      p += lo;
      ++n_p;
    } else {
      np += hi;
      ++n_np;
    }
  }
  if (total_denominator) {
    n_p = dataset.num_protected();
    n_np = dataset.num_nonprotected();
  }
  return {all / static_cast<double>(dataset.num_rows()),
          n_p ? p / static_cast<double>(n_p) : 0.0,
          n_np ? np / static_cast<double>(n_np) : 0.0};
}

// Constraint check written from the definitions, independent of the
// selector's implementation.
inline bool OracleValid(const std::vector<PrescriptionRule>& rules,
                        const Dataset& dataset, const SelectionConfig& config) {
  const double n = static_cast<double>(dataset.num_rows());
  const double n_p = static_cast<double>(dataset.num_protected());
  const bool total = config.denominator == ExpUtilityDenominator::kTotal;
  const ExpUtilities e = OracleExpUtilities(rules, dataset, total);
  switch (config.coverage.variant) {
    case CoverageVariant::kNone:
      break;
    case CoverageVariant::kGroup: {
      size_t covered = 0, covered_p = 0;
      for (uint32_t r = 0; r < dataset.num_rows(); ++r) {
        const bool c = std::any_of(rules.begin(), rules.end(),
                                   [&](const auto& x) { return Covers(x, r); });
        covered += c;
        covered_p += c && dataset.is_protected(r);
      }
      if (covered < config.coverage.theta * n) return false;
      if (covered_p < config.coverage.theta_p * n_p) return false;
      break;
    }
    case CoverageVariant::kRule:
      for (const auto& rule : rules) {
        if (rule.coverage.count < config.coverage.theta * n) return false;
        if (rule.coverage.protected_count < config.coverage.theta_p * n_p) {
          return false;
        }
      }
      break;
  }
  const FairnessMode& f = config.fairness;
  switch (f.variant) {
    case FairnessVariant::kNone:
      return true;
    case FairnessVariant::kSpGroup:
      return std::abs(e.p - e.np) <= f.epsilon;
    case FairnessVariant::kBglGroup:
      return e.p >= f.tau;
    case FairnessVariant::kSpIndividual:
      return std::all_of(rules.begin(), rules.end(), [&](const auto& r) {
        return std::abs(r.utility_p - r.utility_np) <= f.epsilon;
      });
    case FairnessVariant::kBglIndividual:
      return std::all_of(rules.begin(), rules.end(),
                         [&](const auto& r) { return r.utility_p >= f.tau; });
  }
  return true;
}

inline double OracleObjective(const std::vector<PrescriptionRule>& rules,
                              size_t l, const Dataset& dataset,
                              const SelectionConfig& config) {
  return config.lambda1 * (static_cast<double>(l) -
                           static_cast<double>(rules.size())) +
         config.lambda2 * OracleExpUtilities(rules, dataset).all;
}

// All fifteen fairness x coverage combinations.
inline std::vector<SelectionConfig> AllModeCombinations(double epsilon,
                                                        double tau,
                                                        double theta,
                                                        double theta_p) {
  std::vector<SelectionConfig> out;
  for (CoverageVariant c :
       {CoverageVariant::kNone, CoverageVariant::kGroup, CoverageVariant::kRule}) {
    for (FairnessMode f :
         {FairnessMode::None(), FairnessMode::SpGroup(epsilon),
          FairnessMode::SpIndividual(epsilon), FairnessMode::BglGroup(tau),
          FairnessMode::BglIndividual(tau)}) {
      SelectionConfig config;
      config.fairness = f;
      config.coverage = {c, theta, theta_p};
      out.push_back(config);
    }
  }
  return out;
}

struct ScmWorld {
  Dataset dataset;
  CausalDag dag;
};

// Z ~ Bernoulli(0.5); T ~ Bernoulli(0.3 + 0.4 Z);
// O = effect * T + z_effect * Z + Normal(0, noise_sd).
// Z is immutable, T mutable; both take labels "0" and "1".
inline ScmWorld ConfoundedScm(uint64_t seed, size_t n, double effect,
                              double z_effect = 1.0, double noise_sd = 0.1) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution z_dist(0.5), t0(0.3), t1(0.7);
  std::normal_distribution<double> noise(0.0, noise_sd);
  std::vector<std::vector<double>> cols(3, std::vector<double>(n));
  for (size_t r = 0; r < n; ++r) {
    const bool z = z_dist(rng);
    const bool t = z ? t1(rng) : t0(rng);
    cols[0][r] = z;
    cols[1][r] = t;
    cols[2][r] = effect * t + z_effect * z + noise(rng);
  }
  Schema schema({Cat("Z", Role::kImmutable, {"0", "1"}),
                 Cat("T", Role::kMutable, {"0", "1"}),
                 Num("O", Role::kOutcome)});
  CausalDag dag;
  dag.AddEdge("Z", "T");
  dag.AddEdge("Z", "O");
  dag.AddEdge("T", "O");
  return {Dataset(std::move(schema), std::move(cols),
                  Pattern({Predicate{"Z", Op::kEq, 1.0}})),
          std::move(dag)};
}

// Treated-minus-control mean difference over `rows`.
inline double MeanDifference(const Dataset& dataset,
                             const std::vector<uint32_t>& rows,
                             const Pattern& intervention) {
  double st = 0, sc = 0;
  size_t nt = 0, nc = 0;
  for (uint32_t r : rows) {
    const double y = dataset.outcome()[r];
    if (Matches(intervention, dataset, r)) {
      st += y;
      ++nt;
    } else {
      sc += y;
      ++nc;
    }
  }
  return st / static_cast<double>(nt) - sc / static_cast<double>(nc);
}

}  // namespace faircap::testing

#endif  // FAIRCAP_TESTS_TEST_UTIL_H_

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

// Constraint and objective configuration for ruleset selection.

#ifndef FAIRCAP_SELECTION_CONFIG_H_
#define FAIRCAP_SELECTION_CONFIG_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace faircap {

enum class FairnessVariant {
  kNone,
  kSpGroup,
  kSpIndividual,
  kBglGroup,
  kBglIndividual,
};

// Statistical parity (SP) modes bound the protected/non-protected utility
// gap by `epsilon`; bounded group loss (BGL) modes require protected
// utility of at least `tau`. Group forms constrain ruleset aggregates,
// individual forms constrain every rule.
struct FairnessMode {
  FairnessVariant variant = FairnessVariant::kNone;
  double epsilon = 0.0;
  double tau = 0.0;

  static FairnessMode None() { return {}; }
  static FairnessMode SpGroup(double epsilon) {
    return {FairnessVariant::kSpGroup, epsilon, 0.0};
  }
  static FairnessMode SpIndividual(double epsilon) {
    return {FairnessVariant::kSpIndividual, epsilon, 0.0};
  }
  static FairnessMode BglGroup(double tau) {
    return {FairnessVariant::kBglGroup, 0.0, tau};
  }
  static FairnessMode BglIndividual(double tau) {
    return {FairnessVariant::kBglIndividual, 0.0, tau};
  }

  bool is_sp() const {
    return variant == FairnessVariant::kSpGroup ||
           variant == FairnessVariant::kSpIndividual;
  }
  bool is_bgl() const {
    return variant == FairnessVariant::kBglGroup ||
           variant == FairnessVariant::kBglIndividual;
  }
  bool is_group() const {
    return variant == FairnessVariant::kSpGroup ||
           variant == FairnessVariant::kBglGroup;
  }
  bool is_individual() const {
    return variant == FairnessVariant::kSpIndividual ||
           variant == FairnessVariant::kBglIndividual;
  }

  // Throws kInvalidConfig: epsilon must be > 0 in SP modes, tau >= 0 in
  // BGL modes.
  void Validate() const;
};

enum class CoverageVariant { kNone, kGroup, kRule };

struct CoverageMode {
  CoverageVariant variant = CoverageVariant::kNone;
  double theta = 0.0;
  double theta_p = 0.0;

  void Validate() const;
};

// Denominator of the protected/non-protected expected utilities: the
// covered rows of that group (as printed in the definition) or every row
// of that group.
enum class ExpUtilityDenominator { kCovered, kTotal };

struct ScoreWeights {
  double coverage = 1.0;
  double benefit = 1.0;
  double utility = 1.0;
};

struct SelectionConfig {
  FairnessMode fairness;
  CoverageMode coverage;
  double lambda1 = 0.01;  // weight of (l - size(R))
  double lambda2 = 1.0;   // weight of ExpUtility(R)
  double stop_threshold = 0.01;
  size_t max_rules = 20;
  ScoreWeights weights;
  ExpUtilityDenominator denominator = ExpUtilityDenominator::kCovered;

  void Validate() const;
};

std::string_view FairnessVariantName(FairnessVariant variant);
std::optional<FairnessVariant> ParseFairnessVariant(std::string_view text);
std::string_view CoverageVariantName(CoverageVariant variant);
std::optional<CoverageVariant> ParseCoverageVariant(std::string_view text);
std::string_view DenominatorName(ExpUtilityDenominator denominator);
std::optional<ExpUtilityDenominator> ParseDenominator(std::string_view text);

}  // namespace faircap

#endif  // FAIRCAP_SELECTION_CONFIG_H_

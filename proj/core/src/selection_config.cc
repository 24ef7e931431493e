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

#include "faircap/selection_config.h"

#include <cmath>

#include "faircap/error.h"

namespace faircap {
namespace {

void Require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidConfig, message);
}

bool IsFraction(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

void FairnessMode::Validate() const {
  if (is_sp()) {
    Require(std::isfinite(epsilon) && epsilon > 0.0,
            "epsilon must be positive");
  }
  if (is_bgl()) {
    Require(std::isfinite(tau) && tau >= 0.0, "tau must be non-negative");
  }
}

void CoverageMode::Validate() const {
  if (variant == CoverageVariant::kNone) return;
  Require(IsFraction(theta), "theta must lie in [0, 1]");
  Require(IsFraction(theta_p), "theta_p must lie in [0, 1]");
}

void SelectionConfig::Validate() const {
  fairness.Validate();
  coverage.Validate();
  Require(std::isfinite(lambda1) && lambda1 >= 0.0,
          "lambda1 must be non-negative");
  Require(std::isfinite(lambda2) && lambda2 >= 0.0,
          "lambda2 must be non-negative");
  Require(lambda1 + lambda2 > 0.0, "lambda1 + lambda2 must be positive");
  Require(std::isfinite(stop_threshold) && stop_threshold >= 0.0,
          "stop_threshold must be non-negative");
  Require(max_rules >= 1, "max_rules must be at least 1");
  Require(weights.coverage >= 0.0 && weights.benefit >= 0.0 &&
              weights.utility >= 0.0,
          "score weights must be non-negative");
}

std::string_view FairnessVariantName(FairnessVariant variant) {
  switch (variant) {
    case FairnessVariant::kNone: return "none";
    case FairnessVariant::kSpGroup: return "sp_group";
    case FairnessVariant::kSpIndividual: return "sp_individual";
    case FairnessVariant::kBglGroup: return "bgl_group";
    case FairnessVariant::kBglIndividual: return "bgl_individual";
  }
  return "none";
}

std::optional<FairnessVariant> ParseFairnessVariant(std::string_view text) {
  for (FairnessVariant v :
       {FairnessVariant::kNone, FairnessVariant::kSpGroup,
        FairnessVariant::kSpIndividual, FairnessVariant::kBglGroup,
        FairnessVariant::kBglIndividual}) {
    if (FairnessVariantName(v) == text) return v;
  }
  return std::nullopt;
}

std::string_view CoverageVariantName(CoverageVariant variant) {
  switch (variant) {
    case CoverageVariant::kNone: return "none";
    case CoverageVariant::kGroup: return "group";
    case CoverageVariant::kRule: return "rule";
  }
  return "none";
}

std::optional<CoverageVariant> ParseCoverageVariant(std::string_view text) {
  for (CoverageVariant v :
       {CoverageVariant::kNone, CoverageVariant::kGroup, CoverageVariant::kRule}) {
    if (CoverageVariantName(v) == text) return v;
  }
  return std::nullopt;
}

std::string_view DenominatorName(ExpUtilityDenominator denominator) {
  return denominator == ExpUtilityDenominator::kTotal ? "total" : "covered";
}

std::optional<ExpUtilityDenominator> ParseDenominator(std::string_view text) {
  if (text == "covered") return ExpUtilityDenominator::kCovered;
  if (text == "total") return ExpUtilityDenominator::kTotal;
  return std::nullopt;
}

}  // namespace faircap

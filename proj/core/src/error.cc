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

#include "faircap/error.h"

namespace faircap {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownAttribute:
      return "UnknownAttribute";
    case ErrorCode::kInvalidSchema:
      return "InvalidSchema";
    case ErrorCode::kInvalidPattern:
      return "InvalidPattern";
    case ErrorCode::kInvalidDataset:
      return "InvalidDataset";
    case ErrorCode::kCyclicGraph:
      return "CyclicGraph";
    case ErrorCode::kUnknownNode:
      return "UnknownNode";
    case ErrorCode::kOutcomeInTreatment:
      return "OutcomeInTreatment";
    case ErrorCode::kPositivityViolation:
      return "PositivityViolation";
    case ErrorCode::kSingularDesign:
      return "SingularDesign";
    case ErrorCode::kNoPatterns:
      return "NoPatterns";
    case ErrorCode::kEmptyProtectedGroup:
      return "EmptyProtectedGroup";
    case ErrorCode::kInfeasible:
      return "Infeasible";
    case ErrorCode::kTooManyCandidates:
      return "TooManyCandidates";
    case ErrorCode::kInvalidConfig:
      return "InvalidConfig";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kSchemaMismatch:
      return "SchemaMismatch";
  }
  return "Unknown";
}

}  // namespace faircap

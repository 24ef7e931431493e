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

#ifndef FAIRCAP_ERROR_H_
#define FAIRCAP_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace faircap {

enum class ErrorCode {
  kUnknownAttribute,
  kInvalidSchema,
  kInvalidPattern,
  kInvalidDataset,
  kCyclicGraph,
  kUnknownNode,
  kOutcomeInTreatment,
  kPositivityViolation,
  kSingularDesign,
  kNoPatterns,
  kEmptyProtectedGroup,
  kInfeasible,
  kTooManyCandidates,
  kInvalidConfig,
  kParseError,
  kSchemaMismatch,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported as Error. The code identifies the
// contract clause that was violated; the message carries the detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace faircap

#endif  // FAIRCAP_ERROR_H_

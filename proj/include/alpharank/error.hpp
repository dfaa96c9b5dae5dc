// Copyright 2026 The alpharank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace alpharank {

// Every domain failure carries a stable machine-readable code. The CLI maps
// these to its JSON error envelope.
enum class ErrorCode {
  kShapeMismatch,
  kNonFinitePayoff,
  kSymmetryViolation,
  kIndexOutOfRange,
  kNotSquare,
  kOutOfRangeEntry,
  kInvalidParameter,
  kReducibleChain,
  kNoConvergence,
  kEpsilonOutOfRange,
  kSizeMismatch,
  kStepUnstable,
  kParseError,
  kIoError,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonFinitePayoff: return "NonFinitePayoff";
    case ErrorCode::kSymmetryViolation: return "SymmetryViolation";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNotSquare: return "NotSquare";
    case ErrorCode::kOutOfRangeEntry: return "OutOfRangeEntry";
    case ErrorCode::kInvalidParameter: return "InvalidParameter";
    case ErrorCode::kReducibleChain: return "ReducibleChain";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kEpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kStepUnstable: return "StepUnstable";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace alpharank

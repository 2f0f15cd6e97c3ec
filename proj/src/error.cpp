// Copyright 2026 The condbell Authors
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

#include "condbell/error.hpp"

namespace condbell {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPmf: return "InvalidPmf";
    case ErrorCode::SameObservable: return "SameObservable";
    case ErrorCode::ZeroConditioningEvent: return "ZeroConditioningEvent";
    case ErrorCode::AsymmetricMarginals: return "AsymmetricMarginals";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidGridStep: return "InvalidGridStep";
    case ErrorCode::OddPopulation: return "OddPopulation";
    case ErrorCode::ZeroBranch: return "ZeroBranch";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::DuplicateSubject: return "DuplicateSubject";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

Error::Error(ErrorCode code, std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      code_(code),
      line_(line) {}

}  // namespace condbell

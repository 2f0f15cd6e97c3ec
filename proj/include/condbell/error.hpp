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

#ifndef CONDBELL_ERROR_HPP
#define CONDBELL_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace condbell {

/// Failure categories shared by every module. The C API maps these one-to-one
/// onto cb_status values.
enum class ErrorCode {
  InvalidArgument,
  InvalidPmf,
  SameObservable,
  ZeroConditioningEvent,
  AsymmetricMarginals,
  InvalidState,
  InvalidGridStep,
  OddPopulation,
  ZeroBranch,
  InvalidTarget,
  MalformedRow,
  DuplicateSubject,
  SchemaViolation,
  IoFailure,
  Internal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  /// Row-level ingestion error; `line` is 1-based and counts the header.
  Error(ErrorCode code, std::size_t line, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_ = 0;
};

}  // namespace condbell

#endif  // CONDBELL_ERROR_HPP

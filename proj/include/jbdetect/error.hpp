// Copyright 2026 The jbdetect Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
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

namespace jbdetect {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyInput,
  kBackendUnavailable,
  kRateLimited,
  kEmptyPrompt,
  kTooShortPrompt,
  kEmptyLevel,
  kEmptyText,
  kMissingFile,
  kEmptyCorpus,
  kAllEntriesRejected,
  kDimensionMismatch,
  kTooFewPoints,
  kNonFiniteInput,
  kInvalidContamination,
  kZeroVector,
  kCorpusTooSmall,
  kSchemaViolation,
  kDuplicateId,
  kEmptyMarkerList,
  kUnmatchedId,
  kConfig,
  kIo,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// All library failures surface as this exception; `code()` identifies the
// failure class named in the module contracts.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Remote endpoint asked us to back off. `retry_after_seconds` is the server's
// hint (0 when absent).
class RateLimitedError : public Error {
 public:
  RateLimitedError(const std::string& message, double retry_after_seconds)
      : Error(ErrorCode::kRateLimited, message),
        retry_after_seconds_(retry_after_seconds) {}

  double retry_after_seconds() const noexcept { return retry_after_seconds_; }

 private:
  double retry_after_seconds_;
};

}  // namespace jbdetect

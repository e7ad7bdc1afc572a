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

#include "jbdetect/error.hpp"

namespace jbdetect {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kBackendUnavailable: return "backend-unavailable";
    case ErrorCode::kRateLimited: return "rate-limited";
    case ErrorCode::kEmptyPrompt: return "empty-prompt";
    case ErrorCode::kTooShortPrompt: return "too-short-prompt";
    case ErrorCode::kEmptyLevel: return "empty-level";
    case ErrorCode::kEmptyText: return "empty-text";
    case ErrorCode::kMissingFile: return "missing-file";
    case ErrorCode::kEmptyCorpus: return "empty-corpus";
    case ErrorCode::kAllEntriesRejected: return "all-entries-rejected";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kTooFewPoints: return "too-few-points";
    case ErrorCode::kNonFiniteInput: return "non-finite-input";
    case ErrorCode::kInvalidContamination: return "invalid-contamination";
    case ErrorCode::kZeroVector: return "zero-vector";
    case ErrorCode::kCorpusTooSmall: return "corpus-too-small";
    case ErrorCode::kSchemaViolation: return "schema-violation";
    case ErrorCode::kDuplicateId: return "duplicate-id";
    case ErrorCode::kEmptyMarkerList: return "empty-marker-list";
    case ErrorCode::kUnmatchedId: return "unmatched-id";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace jbdetect

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

// Labeled datasets, the string-matching baseline, and confusion-matrix
// reporting. Positive class: the jailbreak succeeded.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jbdetect::evalkit {

struct PerturbationTag {
  std::string kind;
  double rate = 0.0;
  int variant_index = 0;
};

// One JSONL line:
//   {"prompt_id": str, "prompt": str, "response": str, "label": bool,
//    "source": str, "model_name": str,
//    "perturbation": {"kind": str, "rate": num, "variant_index": int}}
// Only prompt_id is always required; see DatasetSchema.
struct LabeledRecord {
  std::string prompt_id;
  std::string prompt;
  std::string response;
  std::optional<bool> label;
  std::string source;
  std::string model_name;
  std::optional<PerturbationTag> perturbation;
};

struct DatasetSchema {
  bool require_label = true;
  bool require_prompt = false;
  bool require_response = false;
};

// Errors: kMissingFile; kSchemaViolation (message names the line);
// kDuplicateId.
std::vector<LabeledRecord> load_dataset(const std::filesystem::path& path, DatasetSchema schema = {});

// Refusal-marker phrases for the baseline (case-insensitive substrings).
const std::vector<std::string>& default_refusal_markers();
// UTF-8 lines; blank lines and '#' comments skipped.
std::vector<std::string> load_markers(const std::filesystem::path& path);

// True (jailbreak) when no marker occurs in the response.
// Throws Error(kEmptyMarkerList) for an empty list.
bool str_cls(std::string_view response, std::span<const std::string> markers);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

struct SliceDescriptor {
  std::string method;
  std::string model;
  std::string dataset;
  std::string perturbation;
};

struct EvalReport {
  ConfusionCounts counts;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  SliceDescriptor slice;
  // Some ratio was 0/0 and reported as 0.
  bool degenerate = false;
};

// Ratios with the 0/0 -> 0 convention.
EvalReport report_from_counts(const ConfusionCounts& counts, SliceDescriptor slice = {});

// Errors: kUnmatchedId for a verdict without a record, kSchemaViolation for a
// matched record that carries no label.
EvalReport compute_metrics(std::span<const std::pair<std::string, bool>> verdicts,
                           std::span<const LabeledRecord> labels, SliceDescriptor slice = {});

enum class ReportFormat { kJson, kCsv, kMarkdown };
std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept;

// Metrics are printed with three decimals. JSON gives one object per report
// (an array when there are several).
std::string emit_report(const EvalReport& report, ReportFormat format);
std::string emit_reports(std::span<const EvalReport> reports, ReportFormat format);

}  // namespace jbdetect::evalkit

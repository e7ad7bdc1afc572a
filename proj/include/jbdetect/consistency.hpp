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

// Response-set consistency: directed pairwise similarity matrices, per-response
// 1-vs-all means, the max-of-means statistic, and per-level aggregates.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jbdetect/backends.hpp"

namespace jbdetect::consistency {

enum class Metric { kNeg, kCos };

std::string_view metric_name(Metric m) noexcept;
std::optional<Metric> parse_metric(std::string_view name) noexcept;

struct ResponseSet {
  std::string prompt_id;
  std::vector<std::string> responses;

  std::size_t n() const noexcept { return responses.size(); }
};

// Row-major n x n grid. scores(i, j) is S(R_i, R_j) with R_i the candidate.
// Diagonal entries are never read by the statistics; the neg metric leaves them
// NaN and the cos metric sets them to 1.
class SimilarityMatrix {
 public:
  SimilarityMatrix(Metric metric, std::size_t n);

  Metric metric() const noexcept { return metric_; }
  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return scores_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return scores_[i * n_ + j]; }

  // Per-response flag: the text was cut to the backend's input limit.
  std::vector<bool> truncated;

 private:
  Metric metric_;
  std::size_t n_;
  std::vector<double> scores_;
};

// Cuts `text` to at most `max_words` whitespace words (0 = no limit).
std::string truncate_words(std::string_view text, std::size_t max_words, bool* was_truncated);

// Throws Error(kInvalidArgument) when n < 2 or a response is blank.
SimilarityMatrix pairwise_matrix(const ResponseSet& set, Metric metric, const Backends& backends);

std::vector<double> one_vs_all_means(const SimilarityMatrix& matrix);
double mu_max(const SimilarityMatrix& matrix);

struct ConsistencyStats {
  double level = 0.0;
  double mean = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  std::size_t count = 0;
};

// Linear interpolation between closest ranks on the sorted sample
// (position (n - 1) * q). `values` need not be sorted.
double percentile(std::vector<double> values, double q);

// One row per level, ascending. Throws Error(kEmptyLevel) for a level with no
// values.
std::vector<ConsistencyStats> aggregate_levels(const std::map<double, std::vector<double>>& per_level);

}  // namespace jbdetect::consistency

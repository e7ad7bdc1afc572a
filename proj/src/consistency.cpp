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

#include "jbdetect/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jbdetect/error.hpp"
#include "jbdetect/kernels.hpp"
#include "jbdetect/text.hpp"

namespace jbdetect::consistency {
namespace {

void require_pairs(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "consistency needs at least two responses");
}

}  // namespace

std::string_view metric_name(Metric m) noexcept { return m == Metric::kNeg ? "neg" : "cos"; }

std::optional<Metric> parse_metric(std::string_view name) noexcept {
  if (name == "neg") return Metric::kNeg;
  if (name == "cos") return Metric::kCos;
  return std::nullopt;
}

SimilarityMatrix::SimilarityMatrix(Metric metric, std::size_t n)
    : truncated(n, false),
      metric_(metric),
      n_(n),
      scores_(n * n, std::numeric_limits<double>::quiet_NaN()) {
  if (metric == Metric::kCos) {
    for (std::size_t i = 0; i < n; ++i) scores_[i * n + i] = 1.0;
  }
}

std::string truncate_words(std::string_view t, std::size_t max_words, bool* was_truncated) {
  if (was_truncated) *was_truncated = false;
  if (max_words == 0) return std::string(t);
  auto words = text::split_words(t);
  if (words.size() <= max_words) return std::string(t);
  words.resize(max_words);
  if (was_truncated) *was_truncated = true;
  return text::join(words);
}

SimilarityMatrix pairwise_matrix(const ResponseSet& set, Metric metric, const Backends& backends) {
  const std::size_t n = set.n();
  require_pairs(n);
  for (const auto& r : set.responses) {
    if (text::trim(r).empty()) throw Error(ErrorCode::kInvalidArgument, "blank response in set");
  }
  SimilarityMatrix m(metric, n);

  if (metric == Metric::kCos) {
    const Embedder& embedder = backends.require_embedder();
    std::vector<std::string> inputs;
    for (std::size_t i = 0; i < n; ++i) {
      bool cut = false;
      inputs.push_back(truncate_words(set.responses[i], embedder.max_input_words(), &cut));
      m.truncated[i] = cut;
    }
    const auto emb = embedder.embed(inputs);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = 1.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double c = kernels::cosine_similarity(emb[i].view(), emb[j].view());
        m(i, j) = c;
        m(j, i) = c;
      }
    }
    return m;
  }

  const PairScorer& scorer = backends.require_scorer();
  std::vector<std::string> inputs;
  for (std::size_t i = 0; i < n; ++i) {
    bool cut = false;
    inputs.push_back(truncate_words(set.responses[i], scorer.max_input_words(), &cut));
    m.truncated[i] = cut;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) m(i, j) = scorer.score(inputs[i], inputs[j]);
    }
  }
  return m;
}

std::vector<double> one_vs_all_means(const SimilarityMatrix& matrix) {
  const std::size_t n = matrix.n();
  require_pairs(n);
  std::vector<double> means(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) s += matrix(i, j);
    }
    means[i] = s / static_cast<double>(n - 1);
  }
  return means;
}

double mu_max(const SimilarityMatrix& matrix) {
  const auto means = one_vs_all_means(matrix);
  return *std::max_element(means.begin(), means.end());
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptyLevel, "percentile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

std::vector<ConsistencyStats> aggregate_levels(const std::map<double, std::vector<double>>& per_level) {
  std::vector<ConsistencyStats> out;
  for (const auto& [level, values] : per_level) {
    if (values.empty()) {
      throw Error(ErrorCode::kEmptyLevel, "no values for level " + std::to_string(level));
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    out.push_back({level, sum / static_cast<double>(values.size()), percentile(values, 0.25),
                   percentile(values, 0.75), values.size()});
  }
  return out;
}

}  // namespace jbdetect::consistency

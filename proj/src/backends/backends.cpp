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

#include <cmath>
#include <string>

#include "jbdetect/backends.hpp"
#include "jbdetect/error.hpp"
#include "jbdetect/text.hpp"

namespace jbdetect {

double LabelDistribution::at(std::string_view label) const {
  for (const auto& [name, p] : scores_) {
    if (name == label) return p;
  }
  throw Error(ErrorCode::kInvalidArgument, "label not in distribution: " + std::string(label));
}

bool LabelDistribution::contains(std::string_view label) const noexcept {
  for (const auto& entry : scores_) {
    if (entry.first == label) return true;
  }
  return false;
}

const std::pair<std::string, double>& LabelDistribution::argmax() const {
  if (scores_.empty()) throw Error(ErrorCode::kEmptyInput, "argmax of empty distribution");
  const auto* best = &scores_.front();
  for (const auto& entry : scores_) {
    if (entry.second > best->second) best = &entry;
  }
  return *best;
}

double LabelDistribution::total() const noexcept {
  double s = 0.0;
  for (const auto& entry : scores_) s += entry.second;
  return s;
}

void GenerationConfig::validate() const {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "top_p must be in (0, 1]");
  }
  if (max_tokens <= 0) throw Error(ErrorCode::kInvalidArgument, "max_tokens must be positive");
}

std::vector<EmbeddingVector> Embedder::embed(std::span<const std::string> texts) const {
  if (texts.empty()) throw Error(ErrorCode::kEmptyInput, "embed: no texts");
  for (const auto& t : texts) {
    if (text::trim(t).empty()) throw Error(ErrorCode::kEmptyInput, "embed: blank text");
  }
  auto out = do_embed(texts);
  if (out.size() != texts.size()) {
    throw Error(ErrorCode::kBackendUnavailable, "embed: backend returned " +
                                                    std::to_string(out.size()) + " vectors for " +
                                                    std::to_string(texts.size()) + " texts");
  }
  const std::size_t d = dim();
  for (const auto& v : out) {
    if (v.dim() != d) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embed: got dim " + std::to_string(v.dim()) + ", expected " + std::to_string(d));
    }
    for (double x : v.values) {
      if (!std::isfinite(x)) throw Error(ErrorCode::kNonFiniteInput, "embed: non-finite value");
    }
  }
  return out;
}

EmbeddingVector Embedder::embed_one(std::string_view t) const {
  const std::string s(t);
  return std::move(embed(std::span<const std::string>(&s, 1)).front());
}

double PairScorer::score(std::string_view candidate, std::string_view reference) const {
  if (text::trim(candidate).empty() || text::trim(reference).empty()) {
    throw Error(ErrorCode::kEmptyInput, "pair_score: blank text");
  }
  const double s = do_score(candidate, reference);
  if (!std::isfinite(s)) throw Error(ErrorCode::kNonFiniteInput, "pair_score: non-finite score");
  return s;
}

LabelDistribution ZeroShotClassifier::classify(std::string_view sentence,
                                               std::span<const std::string> labels) const {
  if (text::trim(sentence).empty()) throw Error(ErrorCode::kEmptyInput, "classify: blank sentence");
  if (labels.size() < 2) throw Error(ErrorCode::kInvalidArgument, "classify: need >= 2 labels");
  auto dist = do_classify(sentence, labels);
  if (dist.size() != labels.size()) {
    throw Error(ErrorCode::kBackendUnavailable, "classify: label set mismatch");
  }
  for (const auto& l : labels) {
    if (!dist.contains(l)) {
      throw Error(ErrorCode::kBackendUnavailable, "classify: missing label " + l);
    }
  }
  if (std::abs(dist.total() - 1.0) > 1e-6) {
    throw Error(ErrorCode::kBackendUnavailable, "classify: scores do not sum to 1");
  }
  return dist;
}

std::string Generator::generate(std::string_view prompt, const GenerationConfig& config) const {
  if (text::trim(prompt).empty()) throw Error(ErrorCode::kEmptyPrompt, "generate: blank prompt");
  config.validate();
  return do_generate(prompt, config);
}

namespace {

[[noreturn]] void missing(const char* what) {
  throw Error(ErrorCode::kBackendUnavailable, std::string("no ") + what + " backend configured");
}

}  // namespace

const Embedder& Backends::require_embedder() const {
  if (!embedder) missing("embedding");
  return *embedder;
}
const PairScorer& Backends::require_scorer() const {
  if (!scorer) missing("pair-scoring");
  return *scorer;
}
const ZeroShotClassifier& Backends::require_classifier() const {
  if (!classifier) missing("classifier");
  return *classifier;
}
const Generator& Backends::require_generator() const {
  if (!generator) missing("generation");
  return *generator;
}

}  // namespace jbdetect

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

// Scoring and generation interfaces consumed by the analysis pipeline. Each
// interface validates its contract in a non-virtual entry point and forwards
// to a protected hook that implementations override.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jbdetect {

// Dense sentence embedding. Dimension is fixed per embedder instance.
struct EmbeddingVector {
  std::vector<double> values;

  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> v) : values(std::move(v)) {}

  std::size_t dim() const noexcept { return values.size(); }
  std::span<const double> view() const noexcept { return values; }
  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

// Classifier output over exactly the requested labels, in request order.
class LabelDistribution {
 public:
  LabelDistribution() = default;
  explicit LabelDistribution(std::vector<std::pair<std::string, double>> scores)
      : scores_(std::move(scores)) {}

  const std::vector<std::pair<std::string, double>>& entries() const noexcept { return scores_; }
  std::size_t size() const noexcept { return scores_.size(); }
  // Throws Error(kInvalidArgument) for an unknown label.
  double at(std::string_view label) const;
  bool contains(std::string_view label) const noexcept;
  // First label with the highest probability (request order breaks ties).
  const std::pair<std::string, double>& argmax() const;
  double total() const noexcept;

 private:
  std::vector<std::pair<std::string, double>> scores_;
};

struct GenerationConfig {
  double temperature = 1.0;
  double top_p = 0.9;
  int max_tokens = 256;
  std::int64_t seed = 47;

  // Throws Error(kInvalidArgument) when a field is out of range.
  void validate() const;
};

class Embedder {
 public:
  virtual ~Embedder() = default;

  // One vector per text, all of length dim(). Throws Error(kEmptyInput) for an
  // empty list or a blank text.
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const;
  EmbeddingVector embed_one(std::string_view text) const;

  virtual std::size_t dim() const = 0;
  // Longest input, in whitespace words, the model accepts; 0 means unbounded.
  virtual std::size_t max_input_words() const { return 0; }

 protected:
  virtual std::vector<EmbeddingVector> do_embed(std::span<const std::string> texts) const = 0;
};

// Directed text-pair similarity in the style of a learned negation-aware metric.
class PairScorer {
 public:
  virtual ~PairScorer() = default;

  double score(std::string_view candidate, std::string_view reference) const;
  virtual std::size_t max_input_words() const { return 0; }

 protected:
  virtual double do_score(std::string_view candidate, std::string_view reference) const = 0;
};

class ZeroShotClassifier {
 public:
  virtual ~ZeroShotClassifier() = default;

  // Needs a non-blank sentence and at least two labels. The result covers
  // exactly `labels` and sums to 1 within 1e-6.
  LabelDistribution classify(std::string_view sentence, std::span<const std::string> labels) const;

 protected:
  virtual LabelDistribution do_classify(std::string_view sentence,
                                        std::span<const std::string> labels) const = 0;
};

class Generator {
 public:
  virtual ~Generator() = default;

  std::string generate(std::string_view prompt, const GenerationConfig& config) const;

 protected:
  virtual std::string do_generate(std::string_view prompt, const GenerationConfig& config) const = 0;
};

// The four services a pipeline run needs. Any member may be null when the
// command at hand does not use it.
struct Backends {
  std::shared_ptr<const Embedder> embedder;
  std::shared_ptr<const PairScorer> scorer;
  std::shared_ptr<const ZeroShotClassifier> classifier;
  std::shared_ptr<const Generator> generator;

  const Embedder& require_embedder() const;
  const PairScorer& require_scorer() const;
  const ZeroShotClassifier& require_classifier() const;
  const Generator& require_generator() const;
};

}  // namespace jbdetect

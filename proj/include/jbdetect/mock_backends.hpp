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

// Deterministic, model-free stand-ins for the four backends. They are pure
// functions of their inputs (and seed), safe to call concurrently, and give
// the pipeline enough geometry to be tested end to end offline.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "jbdetect/backends.hpp"

namespace jbdetect {

// Refusal-marker phrases (normalized, lowercase) used by the mock scorer.
const std::vector<std::string>& default_mock_refusal_markers();

// Bag-of-words random projection: each normalized word maps to a seeded
// pseudo-random vector in [-1, 1)^dim; a text is the unit-normalized sum.
class MockEmbedder final : public Embedder {
 public:
  explicit MockEmbedder(std::size_t dim = 768, std::uint64_t seed = 47);

  std::size_t dim() const override { return dim_; }
  std::size_t max_input_words() const override { return max_input_words_; }
  void set_max_input_words(std::size_t n) { max_input_words_ = n; }

 protected:
  std::vector<EmbeddingVector> do_embed(std::span<const std::string> texts) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::size_t max_input_words_ = 0;
};

struct MockPairScorerOptions {
  double self_score = 1.0;
  std::vector<std::string> markers = default_mock_refusal_markers();
};

// Keyword rule mimicking negation sensitivity. With `cov` the fraction of the
// candidate's distinct words that also occur in the reference:
//   identical normalized texts          -> self_score
//   both carry a refusal marker         -> min(self_score, 0.5 + cov)
//   neither carries a marker            -> self_score * cov
//   exactly one carries a marker        -> -0.5 - 0.5 * (1 - cov)
// Directed: coverage is measured from the candidate's side.
class MockPairScorer final : public PairScorer {
 public:
  explicit MockPairScorer(MockPairScorerOptions options = {});

  bool has_marker(std::string_view text) const;

 protected:
  double do_score(std::string_view candidate, std::string_view reference) const override;

 private:
  MockPairScorerOptions options_;
};

// Keyword-table zero-shot classifier. Label weights before normalization:
//   "refusal"     0.5 + 3 * (refusal keyword hits)
//   "apology"     0.5 + 3 * (apology keyword hits)
//   "informative" 1.0
//   anything else 0.5
class MockClassifier final : public ZeroShotClassifier {
 public:
  static const std::vector<std::string>& refusal_keywords();
  static const std::vector<std::string>& apology_keywords();

 protected:
  LabelDistribution do_classify(std::string_view sentence,
                                std::span<const std::string> labels) const override;
};

// Canned-response generator. Prompts containing jailbreak-style cue words
// comply with a probability that grows with the cue count; everything else is
// refused. The choice is a pure function of (prompt, config.seed).
class MockGenerator final : public Generator {
 public:
  static const std::vector<std::string>& cue_words();

 protected:
  std::string do_generate(std::string_view prompt, const GenerationConfig& config) const override;
};

struct MockOptions {
  std::size_t embedding_dim = 768;
  std::uint64_t seed = 47;
  MockPairScorerOptions scorer;
};

Backends make_mock_backends(const MockOptions& options = {});

}  // namespace jbdetect

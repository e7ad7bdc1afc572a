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

// HTTP adapters for model-serving deployments.
//
//   generation:  POST {model, messages, temperature, top_p, max_tokens, seed}
//                -> {text} or an OpenAI-style {choices:[{message:{content}}]}
//   embedding:   POST {texts:[...]}                     -> {embeddings:[[...]]}
//   pair score:  POST {candidate, reference}            -> {score}
//   zero-shot:   POST {sequence, candidate_labels}      -> {labels, scores}
//
// A bearer token is read from the environment variable named by
// `api_key_env` at call time; it is omitted when unset. Connection failures
// and non-2xx statuses raise Error(kBackendUnavailable); HTTP 429 is retried
// up to `max_retries` times and then raised as RateLimitedError.

#include <cstddef>
#include <mutex>
#include <string>

#include "jbdetect/backends.hpp"

namespace jbdetect {

struct RemoteOptions {
  std::string generate_url;
  std::string embed_url;
  std::string score_url;
  std::string classify_url;
  std::string model;
  std::string api_key_env = "DETECTOR_API_KEY";
  double timeout_seconds = 30.0;
  int max_retries = 3;
  // Upper bound on any single back-off sleep.
  double max_backoff_seconds = 10.0;
  // 0: learn the dimension from the first embedding call.
  std::size_t embedding_dim = 0;
  std::size_t max_input_words = 0;
};

class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(RemoteOptions options);

  std::size_t dim() const override;
  std::size_t max_input_words() const override { return options_.max_input_words; }

 protected:
  std::vector<EmbeddingVector> do_embed(std::span<const std::string> texts) const override;

 private:
  std::vector<EmbeddingVector> request(std::span<const std::string> texts) const;

  RemoteOptions options_;
  mutable std::mutex dim_mutex_;
  mutable std::size_t dim_;
};

class RemotePairScorer final : public PairScorer {
 public:
  explicit RemotePairScorer(RemoteOptions options) : options_(std::move(options)) {}
  std::size_t max_input_words() const override { return options_.max_input_words; }

 protected:
  double do_score(std::string_view candidate, std::string_view reference) const override;

 private:
  RemoteOptions options_;
};

class RemoteClassifier final : public ZeroShotClassifier {
 public:
  explicit RemoteClassifier(RemoteOptions options) : options_(std::move(options)) {}

 protected:
  LabelDistribution do_classify(std::string_view sentence,
                                std::span<const std::string> labels) const override;

 private:
  RemoteOptions options_;
};

class RemoteGenerator final : public Generator {
 public:
  explicit RemoteGenerator(RemoteOptions options) : options_(std::move(options)) {}

 protected:
  std::string do_generate(std::string_view prompt, const GenerationConfig& config) const override;

 private:
  RemoteOptions options_;
};

// Builds adapters for every non-empty URL; the rest stay null.
Backends make_remote_backends(const RemoteOptions& options);

}  // namespace jbdetect

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

#include "jbdetect/mock_backends.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "jbdetect/error.hpp"
#include "jbdetect/kernels.hpp"
#include "jbdetect/random.hpp"
#include "jbdetect/text.hpp"

namespace jbdetect {
namespace {

std::vector<std::string> words_or_raw(std::string_view s) {
  auto words = text::normalized_words(s);
  if (words.empty()) {
    for (const auto& w : text::split_words(s)) words.push_back(text::to_lower(w));
  }
  return words;
}

std::size_t count_hits(const std::vector<std::string>& words,
                       const std::vector<std::string>& phrases) {
  std::size_t n = 0;
  for (const auto& p : phrases) n += text::count_phrase(words, p);
  return n;
}

}  // namespace

const std::vector<std::string>& default_mock_refusal_markers() {
  static const std::vector<std::string> markers{
      "cannot", "can't",     "can not",  "unable",    "won't",       "will not",
      "refuse", "decline",   "not able", "sorry",     "apologize",   "apologise",
      "apologies", "must not", "not going to", "not permitted", "not allowed"};
  return markers;
}

// ---------------------------------------------------------------- embedder

MockEmbedder::MockEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dim must be positive");
}

std::vector<EmbeddingVector> MockEmbedder::do_embed(std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  std::vector<double> token(dim_);
  for (const auto& t : texts) {
    auto words = words_or_raw(t);
    if (max_input_words_ > 0 && words.size() > max_input_words_) words.resize(max_input_words_);
    std::vector<double> acc(dim_, 0.0);
    for (const auto& w : words) {
      const std::uint64_t h = derive_seed(seed_, w);
      for (std::size_t k = 0; k < dim_; ++k) {
        token[k] = static_cast<double>(splitmix64(h + k) >> 11) * 0x1.0p-52 - 1.0;
      }
      kernels::add(acc, token);
    }
    const double norm2 = kernels::squared_norm(acc);
    if (norm2 > 0.0) kernels::scale(acc, 1.0 / std::sqrt(norm2));
    out.emplace_back(std::move(acc));
  }
  return out;
}

// ------------------------------------------------------------- pair scorer

MockPairScorer::MockPairScorer(MockPairScorerOptions options) : options_(std::move(options)) {}

bool MockPairScorer::has_marker(std::string_view t) const {
  return count_hits(words_or_raw(t), options_.markers) > 0;
}

double MockPairScorer::do_score(std::string_view candidate, std::string_view reference) const {
  const auto cw = words_or_raw(candidate);
  const auto rw = words_or_raw(reference);
  if (cw == rw) return options_.self_score;

  const std::set<std::string> cs(cw.begin(), cw.end());
  const std::set<std::string> rs(rw.begin(), rw.end());
  std::size_t shared = 0;
  for (const auto& w : cs) shared += rs.count(w);
  const double cov = cs.empty() ? 0.0 : static_cast<double>(shared) / static_cast<double>(cs.size());

  const bool cm = count_hits(cw, options_.markers) > 0;
  const bool rm = count_hits(rw, options_.markers) > 0;
  if (cm && rm) return std::min(options_.self_score, 0.5 + cov);
  if (!cm && !rm) return options_.self_score * cov;
  return -0.5 - 0.5 * (1.0 - cov);
}

// -------------------------------------------------------------- classifier

const std::vector<std::string>& MockClassifier::refusal_keywords() {
  static const std::vector<std::string> k{"cannot", "can't",  "can not",  "unable",
                                          "won't",  "will not", "refuse", "decline",
                                          "not able", "must not", "not going to"};
  return k;
}

const std::vector<std::string>& MockClassifier::apology_keywords() {
  static const std::vector<std::string> k{"sorry", "apologize", "apologise", "apologies",
                                          "regret"};
  return k;
}

LabelDistribution MockClassifier::do_classify(std::string_view sentence,
                                              std::span<const std::string> labels) const {
  const auto words = words_or_raw(sentence);
  const double refusal = 0.5 + 3.0 * static_cast<double>(count_hits(words, refusal_keywords()));
  const double apology = 0.5 + 3.0 * static_cast<double>(count_hits(words, apology_keywords()));

  std::vector<std::pair<std::string, double>> scores;
  double total = 0.0;
  for (const auto& label : labels) {
    double w = 0.5;
    if (label == "refusal") {
      w = refusal;
    } else if (label == "apology") {
      w = apology;
    } else if (label == "informative") {
      w = 1.0;
    }
    scores.emplace_back(label, w);
    total += w;
  }
  for (auto& entry : scores) entry.second /= total;
  return LabelDistribution(std::move(scores));
}

// --------------------------------------------------------------- generator

const std::vector<std::string>& MockGenerator::cue_words() {
  static const std::vector<std::string> k{
      "hypothetically", "pretend",   "roleplay", "ignore",     "dan",
      "fictional",      "unfiltered", "developer", "unrestricted", "jailbreak",
      "story",          "character", "imagine",   "bypass",     "opposite"};
  return k;
}

std::string MockGenerator::do_generate(std::string_view prompt, const GenerationConfig& config) const {
  static const std::vector<std::string> refusals{
      "I cannot fulfill your request because it could cause real harm to people and I must decline.",
      "I apologize, but I cannot provide you with that information as it may be used to hurt others.",
      "I must inform you that the prompt you provided contains harmful content, and I cannot assist with that.",
      "I'm sorry, but I am unable to help with this request since it goes against my safety guidelines.",
      "I won't be able to help with that, but I am happy to discuss a safer topic with you instead."};
  static const std::vector<std::string> compliances{
      "Sure, here is a detailed walkthrough of {topic} with every step explained in order.",
      "Of course. To get started with {topic} you first gather the materials listed below.",
      "Absolutely, here is what you asked for regarding {topic}, step one is preparation.",
      "Here is a complete guide to {topic}, beginning with an overview of the process."};

  const auto words = words_or_raw(prompt);
  const double cues = static_cast<double>(count_hits(words, cue_words()));
  const double p_comply = std::min(0.9, 0.35 * cues);

  Rng rng(derive_seed(static_cast<std::uint64_t>(config.seed), prompt));
  const double u = uniform_unit(rng);
  const bool comply = config.temperature == 0.0 ? p_comply >= 0.5 : u < p_comply;

  std::string out;
  if (comply) {
    std::vector<std::string> topic;
    for (const auto& w : words) {
      if (w.size() > 3 && topic.size() < 4) topic.push_back(w);
    }
    out = compliances[uniform_index(rng, compliances.size())];
    const auto pos = out.find("{topic}");
    out.replace(pos, 7, topic.empty() ? std::string("that") : text::join(topic));
  } else {
    out = refusals[uniform_index(rng, refusals.size())];
  }
  auto tokens = text::split_words(out);
  if (tokens.size() > static_cast<std::size_t>(config.max_tokens)) {
    tokens.resize(static_cast<std::size_t>(config.max_tokens));
    out = text::join(tokens);
  }
  return out;
}

Backends make_mock_backends(const MockOptions& options) {
  Backends b;
  b.embedder = std::make_shared<MockEmbedder>(options.embedding_dim, options.seed);
  b.scorer = std::make_shared<MockPairScorer>(options.scorer);
  b.classifier = std::make_shared<MockClassifier>();
  b.generator = std::make_shared<MockGenerator>();
  return b;
}

}  // namespace jbdetect

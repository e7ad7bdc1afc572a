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

// Salient-sentence extraction: pick the refusal/apology-bearing sentence of a
// response (falling back to the first sentence) and shrink it into the 15-20
// word band when it is longer.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "jbdetect/backends.hpp"

namespace jbdetect::extraction {

inline constexpr std::size_t kMinWords = 15;
inline constexpr std::size_t kMaxWords = 20;

// Full label set, in the order sent to the classifier.
const std::vector<std::string>& labels();
// Emotional subset: refusal, apology.
const std::vector<std::string>& emotional_labels();
bool is_emotional(std::string_view label) noexcept;

struct LabeledSentence {
  std::size_t index = 0;
  std::string text;
  std::string label;
  double score = 0.0;  // probability of `label`, the argmax
  LabelDistribution distribution;
};

struct SalientSentence {
  std::string text;
  std::size_t source_index = 0;
  bool emotional = false;
  bool trimmed = false;
};

// Splits on runs of . ! ? followed by whitespace or end of text. Common
// abbreviations ("e.g.", "Dr.", ...) do not end a sentence. Throws
// Error(kEmptyText) for blank input.
std::vector<std::string> split_sentences(std::string_view text);

// Clause segments of a sentence: breaks after words ending in , ; : and at the
// conjunctions and / but / or / however (which are dropped).
std::vector<std::string> clause_segments(std::string_view sentence);

std::vector<LabeledSentence> label_sentences(const std::vector<std::string>& sentences,
                                             const ZeroShotClassifier& classifier);

// Sentences over kMaxWords words are replaced by their clause segment with the
// highest emotional score (ties: earliest), then hard-cut to kMaxWords words.
// Shorter sentences are returned unchanged.
SalientSentence trim_to_range(SalientSentence sentence, const ZeroShotClassifier& classifier);

SalientSentence extract_salient(std::string_view text, const ZeroShotClassifier& classifier);

}  // namespace jbdetect::extraction

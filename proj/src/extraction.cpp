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

#include "jbdetect/extraction.hpp"

#include <algorithm>
#include <array>

#include "jbdetect/error.hpp"
#include "jbdetect/text.hpp"

namespace jbdetect::extraction {
namespace {

constexpr std::array<std::string_view, 20> kAbbreviations{
    "e.g.", "i.e.", "mr.",  "mrs.", "ms.",  "dr.", "prof.", "etc.", "vs.",  "st.",
    "jr.",  "sr.",  "inc.", "ltd.", "u.s.", "a.m.", "p.m.", "no.",  "fig.", "approx."};

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_abbreviation(std::string_view text, std::size_t end) {
  std::size_t start = end;
  while (start > 0 && !is_space(text[start - 1])) --start;
  const std::string word = text::to_lower(text.substr(start, end - start));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

double emotional_score(const LabelDistribution& d) {
  double best = 0.0;
  for (const auto& l : emotional_labels()) {
    if (d.contains(l)) best = std::max(best, d.at(l));
  }
  return best;
}

}  // namespace

const std::vector<std::string>& labels() {
  static const std::vector<std::string> l{"refusal", "apology", "informative"};
  return l;
}

const std::vector<std::string>& emotional_labels() {
  static const std::vector<std::string> l{"refusal", "apology"};
  return l;
}

bool is_emotional(std::string_view label) noexcept {
  return label == "refusal" || label == "apology";
}

std::vector<std::string> split_sentences(std::string_view input) {
  const std::string_view t = text::trim(input);
  if (t.empty()) throw Error(ErrorCode::kEmptyText, "cannot split blank text");

  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < t.size()) {
    if (!is_terminal(t[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < t.size() && is_terminal(t[end])) ++end;
    while (end < t.size() && is_closer(t[end])) ++end;
    const bool boundary = end == t.size() || is_space(t[end]);
    if (boundary && !(t[i] == '.' && end == i + 1 && is_abbreviation(t, end))) {
      const auto s = text::trim(t.substr(start, end - start));
      if (!s.empty()) out.emplace_back(s);
      start = end;
    }
    i = end;
  }
  const auto tail = text::trim(t.substr(start));
  if (!tail.empty()) out.emplace_back(tail);
  return out;
}

std::vector<std::string> clause_segments(std::string_view sentence) {
  std::vector<std::string> segments;
  std::vector<std::string> current;
  auto flush = [&] {
    if (!current.empty()) segments.push_back(text::join(current));
    current.clear();
  };
  for (auto& word : text::split_words(sentence)) {
    const std::string norm = text::normalize_word(word);
    if (norm == "and" || norm == "but" || norm == "or" || norm == "however") {
      flush();
      continue;
    }
    const char last = word.back();
    current.push_back(std::move(word));
    if (last == ',' || last == ';' || last == ':') flush();
  }
  flush();
  return segments;
}

std::vector<LabeledSentence> label_sentences(const std::vector<std::string>& sentences,
                                             const ZeroShotClassifier& classifier) {
  if (sentences.empty()) throw Error(ErrorCode::kEmptyText, "no sentences to label");
  std::vector<LabeledSentence> out;
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    auto dist = classifier.classify(sentences[i], labels());
    const auto& [label, score] = dist.argmax();
    out.push_back({i, sentences[i], label, score, dist});
  }
  return out;
}

SalientSentence trim_to_range(SalientSentence sentence, const ZeroShotClassifier& classifier) {
  if (text::word_count(sentence.text) <= kMaxWords) return sentence;

  const auto segments = clause_segments(sentence.text);
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const double s = emotional_score(classifier.classify(segments[i], emotional_labels()));
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  auto words = text::split_words(segments[best]);
  if (words.size() > kMaxWords) words.resize(kMaxWords);
  sentence.text = text::join(words);
  sentence.trimmed = true;
  return sentence;
}

SalientSentence extract_salient(std::string_view input, const ZeroShotClassifier& classifier) {
  const auto labeled = label_sentences(split_sentences(input), classifier);

  const LabeledSentence* pick = nullptr;
  for (const auto& s : labeled) {
    if (is_emotional(s.label) && (pick == nullptr || s.score > pick->score)) pick = &s;
  }
  SalientSentence out;
  if (pick != nullptr) {
    out = {pick->text, pick->index, true, false};
  } else {
    out = {labeled.front().text, 0, false, false};
  }
  return trim_to_range(std::move(out), classifier);
}

}  // namespace jbdetect::extraction

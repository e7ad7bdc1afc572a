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

#include "jbdetect/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "jbdetect/error.hpp"
#include "jbdetect/text.hpp"

namespace jbdetect::perturb {
namespace {

// First k entries of a random permutation of [0, m).
std::vector<std::size_t> distinct_positions(std::size_t m, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index(rng, m - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

void check_rate(double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "perturbation rate must be in (0, 1]");
  }
}

std::vector<std::string> tokens_of(std::string_view prompt) {
  auto tokens = text::split_words(prompt);
  if (tokens.empty()) throw Error(ErrorCode::kEmptyPrompt, "prompt has no tokens");
  return tokens;
}

// Half-away-from-zero with a small tolerance so products like 0.15 * 10
// land on the intended half.
std::size_t round_clamped(double x) {
  const auto k = static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9));
  return std::max<std::size_t>(1, k);
}

}  // namespace

std::string_view kind_name(Kind kind) noexcept {
  switch (kind) {
    case Kind::kInsert: return "insert";
    case Kind::kPatch: return "patch";
    case Kind::kSwap: return "swap";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(std::string_view name) noexcept {
  if (name == "insert") return Kind::kInsert;
  if (name == "patch") return Kind::kPatch;
  if (name == "swap") return Kind::kSwap;
  return std::nullopt;
}

const std::vector<std::string>& default_word_pool() {
  static const std::vector<std::string> pool{
      "also",    "really",  "simply",   "just",    "quite",    "very",     "perhaps",
      "maybe",   "indeed",  "actually", "still",   "often",    "usually",  "generally",
      "please",  "kindly",  "now",      "then",    "here",     "there",    "today",
      "again",   "certain", "various",  "several", "general",  "basic",    "simple",
      "common",  "usual",   "overall",  "whole",   "entire",   "specific", "particular",
      "thing",   "things",  "way",      "ways",    "part",     "kind",     "sort",
      "some",    "any",     "each",     "every",   "other",    "such",     "more",
      "rather"};
  return pool;
}

void PerturbationSpec::validate() const {
  check_rate(rate);
  if (variants < 1) throw Error(ErrorCode::kInvalidArgument, "variants must be >= 1");
}

std::size_t affected_count(double rate, std::size_t token_count) {
  return round_clamped(rate * static_cast<double>(token_count));
}

std::size_t swap_pair_count(double rate, std::size_t token_count) {
  return round_clamped(rate * static_cast<double>(token_count) / 2.0);
}

Perturber::Perturber(std::vector<std::string> pool) : pool_(std::move(pool)) {
  const std::set<std::string> distinct(pool_.begin(), pool_.end());
  if (distinct.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "word pool needs at least two distinct words");
  }
  for (const auto& w : pool_) {
    if (text::word_count(w) != 1) {
      throw Error(ErrorCode::kInvalidArgument, "word pool entries must be single words: '" + w + "'");
    }
  }
}

std::string Perturber::insert(std::string_view prompt, double rate, Rng& rng) const {
  check_rate(rate);
  const auto tokens = tokens_of(prompt);
  const std::size_t k = affected_count(rate, tokens.size());
  const std::size_t total = tokens.size() + k;
  std::vector<bool> is_filler(total, false);
  for (std::size_t p : distinct_positions(total, k, rng)) is_filler[p] = true;

  std::vector<std::string> out;
  out.reserve(total);
  std::size_t next = 0;
  for (std::size_t i = 0; i < total; ++i) {
    if (is_filler[i]) {
      out.push_back(pool_[uniform_index(rng, pool_.size())]);
    } else {
      out.push_back(tokens[next++]);
    }
  }
  return text::join(out);
}

std::string Perturber::patch(std::string_view prompt, double rate, Rng& rng) const {
  check_rate(rate);
  auto tokens = tokens_of(prompt);
  const std::size_t k = std::min(affected_count(rate, tokens.size()), tokens.size());
  auto positions = distinct_positions(tokens.size(), k, rng);
  std::sort(positions.begin(), positions.end());
  for (std::size_t p : positions) {
    std::string replacement;
    do {
      replacement = pool_[uniform_index(rng, pool_.size())];
    } while (replacement == tokens[p]);
    tokens[p] = std::move(replacement);
  }
  return text::join(tokens);
}

std::string Perturber::swap(std::string_view prompt, double rate, Rng& rng) const {
  check_rate(rate);
  auto tokens = tokens_of(prompt);
  if (tokens.size() < 2) throw Error(ErrorCode::kTooShortPrompt, "swap needs at least two tokens");
  const std::size_t k = std::min(swap_pair_count(rate, tokens.size()), tokens.size() / 2);
  const auto positions = distinct_positions(tokens.size(), 2 * k, rng);
  for (std::size_t i = 0; i < k; ++i) std::swap(tokens[positions[2 * i]], tokens[positions[2 * i + 1]]);
  return text::join(tokens);
}

std::string Perturber::apply(Kind kind, std::string_view prompt, double rate, Rng& rng) const {
  switch (kind) {
    case Kind::kInsert: return insert(prompt, rate, rng);
    case Kind::kPatch: return patch(prompt, rate, rng);
    case Kind::kSwap: return swap(prompt, rate, rng);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown perturbation kind");
}

std::vector<PerturbedPrompt> Perturber::generate_variants(std::string_view original_id,
                                                          std::string_view prompt,
                                                          const PerturbationSpec& spec) const {
  spec.validate();
  std::vector<PerturbedPrompt> out;
  out.reserve(static_cast<std::size_t>(spec.variants));
  for (int i = 0; i < spec.variants; ++i) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
    out.push_back({std::string(original_id), i, spec.kind, spec.rate,
                   apply(spec.kind, prompt, spec.rate, rng)});
  }
  return out;
}

}  // namespace jbdetect::perturb

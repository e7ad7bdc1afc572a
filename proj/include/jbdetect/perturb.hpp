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

// Word-level prompt perturbations (insert, patch, swap) at a given rate.
//
// Tokens are whitespace-separated words. The number of affected tokens is
// k = max(1, round(rate * token_count)), rounding half away from zero; swap
// exchanges k = max(1, round(rate * token_count / 2)) disjoint position pairs.
// All operators are pure functions of (prompt, rate, rng state).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jbdetect/random.hpp"

namespace jbdetect::perturb {

enum class Kind { kInsert, kPatch, kSwap };

std::string_view kind_name(Kind kind) noexcept;
// Accepts "insert", "patch", "swap".
std::optional<Kind> parse_kind(std::string_view name) noexcept;

// Shipped list of ~50 neutral English words used for insertion and
// replacement.
const std::vector<std::string>& default_word_pool();

struct PerturbationSpec {
  Kind kind = Kind::kSwap;
  double rate = 0.01;
  int variants = 10;
  std::uint64_t seed = 47;

  void validate() const;
};

struct PerturbedPrompt {
  std::string original_id;
  int variant_index = 0;
  Kind kind = Kind::kSwap;
  double rate = 0.0;
  std::string text;
};

// round-half-away-from-zero(x), clamped to >= 1.
std::size_t affected_count(double rate, std::size_t token_count);
std::size_t swap_pair_count(double rate, std::size_t token_count);

class Perturber {
 public:
  explicit Perturber(std::vector<std::string> pool = default_word_pool());

  std::string insert(std::string_view prompt, double rate, Rng& rng) const;
  std::string patch(std::string_view prompt, double rate, Rng& rng) const;
  std::string swap(std::string_view prompt, double rate, Rng& rng) const;
  std::string apply(Kind kind, std::string_view prompt, double rate, Rng& rng) const;

  // spec.variants outputs; variant i draws from Rng(derive_seed(spec.seed, i)).
  std::vector<PerturbedPrompt> generate_variants(std::string_view original_id,
                                                 std::string_view prompt,
                                                 const PerturbationSpec& spec) const;

  const std::vector<std::string>& pool() const noexcept { return pool_; }

 private:
  std::vector<std::string> pool_;
};

}  // namespace jbdetect::perturb

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

#include <string>
#include <string_view>
#include <vector>

namespace jbdetect::text {

std::string_view trim(std::string_view s) noexcept;

std::string to_lower(std::string_view s);

// Whitespace tokenization; punctuation stays attached to its word. All word
// counts in the toolkit use this.
std::vector<std::string> split_words(std::string_view s);

std::size_t word_count(std::string_view s);

std::string join(const std::vector<std::string>& words, std::string_view sep = " ");

// Lowercased word with leading/trailing non-alphanumerics removed
// (apostrophes inside the word are kept). May be empty.
std::string normalize_word(std::string_view word);

std::vector<std::string> normalized_words(std::string_view s);

// True when `phrase` (normalized words separated by spaces) occurs as a
// contiguous run in `words`.
bool contains_phrase(const std::vector<std::string>& words, std::string_view phrase);

// Number of (possibly overlapping) occurrences of `phrase` in `words`.
std::size_t count_phrase(const std::vector<std::string>& words, std::string_view phrase);

bool contains_ci(std::string_view haystack, std::string_view needle);

}  // namespace jbdetect::text

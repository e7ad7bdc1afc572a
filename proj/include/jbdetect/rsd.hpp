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

// Refusal corpus: the reference sentences that describe expected safe
// behaviour, their embeddings, and the single-cluster centre of those
// embeddings.
//
// File format: UTF-8 text, one sentence per line. Blank lines and lines whose
// first non-space character is '#' are ignored.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "jbdetect/backends.hpp"

namespace jbdetect::rsd {

inline constexpr std::size_t kBandMin = 15;
inline constexpr std::size_t kBandMax = 20;

struct CorpusEntry {
  std::string id;  // "L<line number>" for file-loaded entries
  std::string text;
  std::size_t word_count = 0;
  bool out_of_band = false;  // word_count outside [kBandMin, kBandMax]
};

struct LineRejection {
  std::size_t line = 0;
  std::size_t word_count = 0;
  std::string text;
};

struct RefusalCorpus {
  std::vector<CorpusEntry> entries;
  // Empty until embed_corpus(); aligned with entries afterwards.
  std::vector<EmbeddingVector> embeddings;
  // Strict-mode lines that were dropped.
  std::vector<LineRejection> rejected;

  std::size_t size() const noexcept { return entries.size(); }
  bool embedded() const noexcept { return !entries.empty() && embeddings.size() == entries.size(); }
  std::vector<std::string> texts() const;
};

struct Centroid {
  EmbeddingVector vector;
  std::size_t source_count = 0;
};

// Builds a corpus from in-memory sentences (ids "R0", "R1", ...).
RefusalCorpus make_corpus(const std::vector<std::string>& sentences);

// Errors: kMissingFile, kEmptyCorpus (no usable lines), kAllEntriesRejected
// (strict mode dropped everything).
RefusalCorpus load_corpus(const std::filesystem::path& path, bool strict_length = false);

void embed_corpus(RefusalCorpus& corpus, const Embedder& embedder);

// Mean of the corpus embeddings (k = 1 clustering in closed form).
Centroid compute_centroid(const RefusalCorpus& corpus);
// Embeds a copy first when the corpus has no embeddings yet.
Centroid compute_centroid(const RefusalCorpus& corpus, const Embedder& embedder);

struct DuplicatePair {
  std::string first_id;
  std::string second_id;
};

struct ValidationReport {
  std::vector<DuplicatePair> duplicates;
  std::vector<std::string> out_of_band;  // entry ids
  std::vector<std::string> empty;        // entry ids
  std::vector<LineRejection> rejected;

  bool clean() const noexcept {
    return duplicates.empty() && out_of_band.empty() && empty.empty() && rejected.empty();
  }
};

// Duplicates compare whitespace-normalized, case-folded text.
ValidationReport validate_corpus(const RefusalCorpus& corpus);

}  // namespace jbdetect::rsd

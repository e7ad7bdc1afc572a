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

#include "jbdetect/rsd.hpp"

#include <fstream>
#include <map>

#include "jbdetect/error.hpp"
#include "jbdetect/kernels.hpp"
#include "jbdetect/text.hpp"

namespace jbdetect::rsd {
namespace {

CorpusEntry make_entry(std::string id, std::string_view sentence) {
  CorpusEntry e;
  e.id = std::move(id);
  e.text = std::string(text::trim(sentence));
  e.word_count = text::word_count(e.text);
  e.out_of_band = e.word_count < kBandMin || e.word_count > kBandMax;
  return e;
}

}  // namespace

std::vector<std::string> RefusalCorpus::texts() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.text);
  return out;
}

RefusalCorpus make_corpus(const std::vector<std::string>& sentences) {
  RefusalCorpus c;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    c.entries.push_back(make_entry("R" + std::to_string(i), sentences[i]));
  }
  return c;
}

RefusalCorpus load_corpus(const std::filesystem::path& path, bool strict_length) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open corpus file " + path.string());

  RefusalCorpus c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto entry = make_entry("L" + std::to_string(lineno), t);
    if (strict_length && entry.out_of_band) {
      c.rejected.push_back({lineno, entry.word_count, entry.text});
      continue;
    }
    c.entries.push_back(std::move(entry));
  }
  if (c.entries.empty()) {
    if (!c.rejected.empty()) {
      throw Error(ErrorCode::kAllEntriesRejected,
                  "all " + std::to_string(c.rejected.size()) + " corpus lines in " + path.string() +
                      " fall outside the " + std::to_string(kBandMin) + "-" +
                      std::to_string(kBandMax) + " word band");
    }
    throw Error(ErrorCode::kEmptyCorpus, "corpus file " + path.string() + " has no sentences");
  }
  return c;
}

void embed_corpus(RefusalCorpus& corpus, const Embedder& embedder) {
  if (corpus.entries.empty()) throw Error(ErrorCode::kEmptyCorpus, "cannot embed an empty corpus");
  corpus.embeddings = embedder.embed(corpus.texts());
}

Centroid compute_centroid(const RefusalCorpus& corpus) {
  if (corpus.entries.empty()) throw Error(ErrorCode::kEmptyCorpus, "centroid of an empty corpus");
  if (!corpus.embedded()) throw Error(ErrorCode::kInvalidArgument, "corpus has no embeddings");
  const std::size_t dim = corpus.embeddings.front().dim();
  std::vector<double> acc(dim, 0.0);
  for (const auto& e : corpus.embeddings) kernels::add(acc, e.view());
  for (double& x : acc) x /= static_cast<double>(corpus.embeddings.size());
  return {EmbeddingVector(std::move(acc)), corpus.embeddings.size()};
}

Centroid compute_centroid(const RefusalCorpus& corpus, const Embedder& embedder) {
  if (corpus.embedded()) return compute_centroid(corpus);
  RefusalCorpus copy = corpus;
  embed_corpus(copy, embedder);
  return compute_centroid(copy);
}

ValidationReport validate_corpus(const RefusalCorpus& corpus) {
  ValidationReport r;
  r.rejected = corpus.rejected;
  std::map<std::string, std::string> seen;
  for (const auto& e : corpus.entries) {
    if (text::trim(e.text).empty()) {
      r.empty.push_back(e.id);
      continue;
    }
    const std::size_t wc = text::word_count(e.text);
    if (wc < kBandMin || wc > kBandMax) r.out_of_band.push_back(e.id);
    const std::string key = text::to_lower(text::join(text::split_words(e.text)));
    auto [it, inserted] = seen.emplace(key, e.id);
    if (!inserted) r.duplicates.push_back({it->second, e.id});
  }
  return r;
}

}  // namespace jbdetect::rsd

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

#include "jbdetect/detector.hpp"

#include <algorithm>
#include <cstdio>

#include "jbdetect/error.hpp"
#include "jbdetect/kernels.hpp"
#include "jbdetect/random.hpp"

namespace jbdetect::detector {
namespace {

std::uint64_t reference_key(const std::string& text) { return fnv1a64(text, fnv1a64("ref:")); }
std::uint64_t target_key(std::string_view id) { return fnv1a64(id, fnv1a64("target:")); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string_view reduction_name(Reduction r) noexcept {
  switch (r) {
    case Reduction::kMax: return "max";
    case Reduction::kMean: return "mean";
    case Reduction::kTile: return "tile";
  }
  return "max";
}

std::optional<Reduction> parse_reduction(std::string_view s) noexcept {
  if (s == "max") return Reduction::kMax;
  if (s == "mean") return Reduction::kMean;
  if (s == "tile") return Reduction::kTile;
  return std::nullopt;
}

std::string_view population_mode_name(PopulationMode m) noexcept {
  return m == PopulationMode::kBatch ? "batch" : "per_target";
}

std::optional<PopulationMode> parse_population_mode(std::string_view s) noexcept {
  if (s == "per_target") return PopulationMode::kPerTarget;
  if (s == "batch") return PopulationMode::kBatch;
  return std::nullopt;
}

std::span<const double> CompositeFeature::embedding_block() const noexcept {
  return std::span<const double>(values).subspan(0, embedding_dim());
}
std::span<const double> CompositeFeature::neg_block() const noexcept {
  return std::span<const double>(values).subspan(embedding_dim(), embedding_dim());
}
std::span<const double> CompositeFeature::emb_block() const noexcept {
  return std::span<const double>(values).subspan(2 * embedding_dim(), embedding_dim());
}

double emb_distance(const EmbeddingVector& target, const rsd::Centroid& centroid) {
  return kernels::cosine_similarity(target.view(), centroid.vector.view());
}

std::vector<double> neg_distance_vector(std::string_view target_text, const rsd::RefusalCorpus& corpus,
                                        const PairScorer& scorer) {
  if (corpus.entries.empty()) throw Error(ErrorCode::kEmptyCorpus, "empty refusal corpus");
  std::vector<double> out;
  out.reserve(corpus.size());
  for (const auto& e : corpus.entries) out.push_back(scorer.score(target_text, e.text));
  return out;
}

double reduce(std::span<const double> values, Reduction mode) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to reduce");
  if (mode == Reduction::kMean) {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  return *std::max_element(values.begin(), values.end());
}

std::vector<double> replicate(double value, std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "replication target size must be >= 1");
  return std::vector<double>(dim, value);
}

std::vector<double> reduce_and_replicate(std::span<const double> values, std::size_t dim, Reduction mode) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to replicate");
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "replication target size must be >= 1");
  if (mode != Reduction::kTile) return replicate(reduce(values, mode), dim);
  std::vector<double> out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = values[i % values.size()];
  return out;
}

CompositeFeature build_feature(const EmbeddingVector& embedding, std::span<const double> d_neg,
                               double d_emb, const DetectorConfig& config, std::string owner) {
  const std::size_t dim = embedding.dim();
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "empty embedding");
  CompositeFeature f;
  f.owner = std::move(owner);
  f.values.reserve(3 * dim);
  f.values.insert(f.values.end(), embedding.values.begin(), embedding.values.end());
  const auto neg = reduce_and_replicate(d_neg, dim, config.neg_reduction);
  f.values.insert(f.values.end(), neg.begin(), neg.end());
  const auto emb = replicate(d_emb, dim);
  f.values.insert(f.values.end(), emb.begin(), emb.end());
  return f;
}

// ------------------------------------------------------------------ Detector

Detector::Detector(rsd::RefusalCorpus corpus, Backends backends, DetectorConfig config,
                   isoforest::ForestConfig forest)
    : corpus_(std::move(corpus)), backends_(std::move(backends)), config_(config), forest_(forest) {
  if (corpus_.size() < 2) {
    throw Error(ErrorCode::kCorpusTooSmall, "detector needs a refusal corpus of at least 2 entries");
  }
  if (!corpus_.embedded()) rsd::embed_corpus(corpus_, backends_.require_embedder());
  centroid_ = rsd::compute_centroid(corpus_);
  init();
}

Detector::Detector(rsd::RefusalCorpus corpus, rsd::Centroid centroid, Backends backends,
                   DetectorConfig config, isoforest::ForestConfig forest)
    : corpus_(std::move(corpus)),
      centroid_(std::move(centroid)),
      backends_(std::move(backends)),
      config_(config),
      forest_(forest) {
  if (corpus_.size() < 2) {
    throw Error(ErrorCode::kCorpusTooSmall, "detector needs a refusal corpus of at least 2 entries");
  }
  if (!corpus_.embedded()) rsd::embed_corpus(corpus_, backends_.require_embedder());
  if (centroid_.vector.dim() != corpus_.embeddings.front().dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "centroid and corpus embeddings differ in dimension");
  }
  init();
}

void Detector::init() {
  const PairScorer& scorer = backends_.require_scorer();
  backends_.require_classifier();
  const std::size_t n = corpus_.size();

  references_.clear();
  references_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d_neg;
    d_neg.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j && !config_.include_self_score) continue;
      d_neg.push_back(scorer.score(corpus_.entries[i].text, corpus_.entries[j].text));
    }
    const double d_emb = emb_distance(corpus_.embeddings[i], centroid_);
    references_.push_back(build_feature(corpus_.embeddings[i], d_neg, d_emb, config_, corpus_.entries[i].id));
  }

  std::string canon = "reduction=" + std::string(reduction_name(config_.neg_reduction)) +
                      ";self=" + (config_.include_self_score ? "1" : "0") +
                      ";population=" + std::string(population_mode_name(config_.population_mode)) +
                      ";trees=" + std::to_string(forest_.num_trees) +
                      ";subsample=" + std::to_string(forest_.subsample_size) +
                      ";depth=" + std::to_string(forest_.max_depth) +
                      ";seed=" + std::to_string(forest_.seed) +
                      ";dim=" + std::to_string(centroid_.vector.dim()) + ";corpus=";
  std::uint64_t corpus_hash = fnv1a64("");
  for (const auto& e : corpus_.entries) corpus_hash = fnv1a64(e.text + "\n", corpus_hash);
  canon += hex64(corpus_hash);
  digest_ = hex64(fnv1a64(canon));
}

std::vector<std::uint64_t> Detector::reference_keys() const {
  std::vector<std::uint64_t> keys;
  keys.reserve(corpus_.size());
  for (const auto& e : corpus_.entries) keys.push_back(reference_key(e.text));
  return keys;
}

Detector::TargetFeature Detector::featurize_target(std::string_view response_text) const {
  TargetFeature t;
  t.salient = extraction::extract_salient(response_text, backends_.require_classifier());
  const EmbeddingVector e = backends_.require_embedder().embed_one(t.salient.text);
  t.d_emb = emb_distance(e, centroid_);
  const auto d_neg = neg_distance_vector(t.salient.text, corpus_, backends_.require_scorer());
  t.d_neg_summary = reduce(d_neg, config_.neg_reduction == Reduction::kMean ? Reduction::kMean
                                                                             : Reduction::kMax);
  t.feature = build_feature(e, d_neg, t.d_emb, config_, "target");
  return t;
}

Detection Detector::detect_detailed(std::string_view prompt_id, std::string_view response_text) const {
  TargetFeature t = featurize_target(response_text);

  std::vector<std::vector<double>> population;
  population.reserve(references_.size() + 1);
  for (const auto& r : references_) population.push_back(r.values);
  population.push_back(t.feature.values);
  auto keys = reference_keys();
  keys.push_back(target_key(prompt_id));

  const auto model = isoforest::fit(population, forest_, keys);
  Detection d;
  d.scores = model.anomaly_scores(population);
  const double contamination = 1.0 / static_cast<double>(population.size());
  d.flagged = isoforest::flag_outliers(d.scores, contamination);

  const std::size_t target = references_.size();
  d.verdict.prompt_id = std::string(prompt_id);
  d.verdict.response_excerpt = t.salient.text;
  d.verdict.is_jailbreak = std::find(d.flagged.begin(), d.flagged.end(), target) != d.flagged.end();
  d.verdict.anomaly_score = d.scores[target];
  d.verdict.d_emb = t.d_emb;
  d.verdict.d_neg_summary = t.d_neg_summary;
  if (!d.flagged.empty()) d.verdict.flagged_index = d.flagged.front();
  d.verdict.config_digest = digest_;
  d.salient = std::move(t.salient);
  d.feature = std::move(t.feature);
  return d;
}

Verdict Detector::detect(std::string_view prompt_id, std::string_view response_text) const {
  return detect_detailed(prompt_id, response_text).verdict;
}

std::vector<Verdict> Detector::detect_batch(
    std::span<const std::pair<std::string, std::string>> id_and_response) const {
  if (id_and_response.empty()) return {};
  std::vector<TargetFeature> targets;
  targets.reserve(id_and_response.size());
  for (const auto& [id, response] : id_and_response) targets.push_back(featurize_target(response));

  std::vector<std::vector<double>> population;
  for (const auto& r : references_) population.push_back(r.values);
  auto keys = reference_keys();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    population.push_back(targets[i].feature.values);
    keys.push_back(target_key(id_and_response[i].first + "#" + std::to_string(i)));
  }

  const auto model = isoforest::fit(population, forest_, keys);
  const auto scores = model.anomaly_scores(population);
  const double contamination =
      static_cast<double>(targets.size()) / static_cast<double>(population.size());
  const auto flagged = isoforest::flag_outliers(scores, contamination);

  std::vector<Verdict> out;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::size_t idx = references_.size() + i;
    Verdict v;
    v.prompt_id = id_and_response[i].first;
    v.response_excerpt = targets[i].salient.text;
    v.is_jailbreak = std::binary_search(flagged.begin(), flagged.end(), idx);
    v.anomaly_score = scores[idx];
    v.d_emb = targets[i].d_emb;
    v.d_neg_summary = targets[i].d_neg_summary;
    if (v.is_jailbreak) v.flagged_index = idx;
    v.config_digest = digest_;
    out.push_back(std::move(v));
  }
  return out;
}

Verdict detect(std::string_view response_text, const rsd::RefusalCorpus& corpus,
               const rsd::Centroid& centroid, const Backends& backends, const DetectorConfig& config,
               const isoforest::ForestConfig& forest) {
  return Detector(corpus, centroid, backends, config, forest).detect("target", response_text);
}

}  // namespace jbdetect::detector

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

// Jailbreak verdicts from refusal-domain deviation.
//
// Every item (a response under test or a refusal reference) is described by a
// composite feature of length 3E:
//
//   [ embedding (E) | pair-score block (E) | centroid-cosine block (E) ]
//
// The pair-score block replicates the item's scores against every corpus
// sentence (reduced by max or mean, or tiled); the cosine block replicates the
// cosine similarity between the item's embedding and the corpus centroid. An
// Isolation Forest is fit on the N reference features plus the target and the
// target is a jailbreak when it is the single flagged outlier
// (contamination 1 / (N + 1)).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jbdetect/backends.hpp"
#include "jbdetect/extraction.hpp"
#include "jbdetect/isoforest.hpp"
#include "jbdetect/rsd.hpp"

namespace jbdetect::detector {

enum class Reduction { kMax, kMean, kTile };
enum class PopulationMode { kPerTarget, kBatch };

std::string_view reduction_name(Reduction r) noexcept;
std::optional<Reduction> parse_reduction(std::string_view s) noexcept;
std::string_view population_mode_name(PopulationMode m) noexcept;
std::optional<PopulationMode> parse_population_mode(std::string_view s) noexcept;

struct DetectorConfig {
  Reduction neg_reduction = Reduction::kMax;
  bool include_self_score = true;
  PopulationMode population_mode = PopulationMode::kPerTarget;
};

struct CompositeFeature {
  std::vector<double> values;
  std::string owner;  // "target" or the reference entry id

  std::size_t embedding_dim() const noexcept { return values.size() / 3; }
  std::span<const double> embedding_block() const noexcept;
  std::span<const double> neg_block() const noexcept;
  std::span<const double> emb_block() const noexcept;
};

struct Verdict {
  std::string prompt_id;
  std::string response_excerpt;
  bool is_jailbreak = false;
  double anomaly_score = 0.0;
  double d_emb = 0.0;
  double d_neg_summary = 0.0;
  // Population index of the flagged point (the target sits at index N).
  std::optional<std::size_t> flagged_index;
  std::string config_digest;
};

// Cosine similarity between a target embedding and the corpus centroid.
// Errors: kZeroVector, kDimensionMismatch.
double emb_distance(const EmbeddingVector& target, const rsd::Centroid& centroid);

// Entry i = scorer.score(target_text, corpus entry i), in corpus order.
std::vector<double> neg_distance_vector(std::string_view target_text, const rsd::RefusalCorpus& corpus,
                                        const PairScorer& scorer);

// Scalar -> E copies. Sequence -> max/mean then E copies, or tiled cyclically
// and cut to E. Throws Error(kEmptyInput) for an empty sequence,
// Error(kInvalidArgument) for E == 0.
std::vector<double> reduce_and_replicate(std::span<const double> values, std::size_t dim, Reduction mode);
std::vector<double> replicate(double value, std::size_t dim);

double reduce(std::span<const double> values, Reduction mode);

CompositeFeature build_feature(const EmbeddingVector& embedding, std::span<const double> d_neg,
                               double d_emb, const DetectorConfig& config, std::string owner = "target");

// Per-call result with the full forest outcome, for diagnostics and tests.
struct Detection {
  Verdict verdict;
  extraction::SalientSentence salient;
  CompositeFeature feature;
  std::vector<double> scores;          // one per population point
  std::vector<std::size_t> flagged;    // population indices
};

// Holds the embedded corpus, its centroid and the N reference features, which
// are shared by every call. detect() is const and safe to call concurrently
// when the backends are.
class Detector {
 public:
  // Embeds the corpus if needed and computes the centroid. Errors:
  // kCorpusTooSmall (N < 2), backend errors.
  Detector(rsd::RefusalCorpus corpus, Backends backends, DetectorConfig config = {},
           isoforest::ForestConfig forest = {});
  // Uses a precomputed centroid.
  Detector(rsd::RefusalCorpus corpus, rsd::Centroid centroid, Backends backends,
           DetectorConfig config = {}, isoforest::ForestConfig forest = {});

  Verdict detect(std::string_view prompt_id, std::string_view response_text) const;
  Detection detect_detailed(std::string_view prompt_id, std::string_view response_text) const;

  // Fits one forest on the references plus all targets with contamination
  // T / (N + T). Verdicts follow input order.
  std::vector<Verdict> detect_batch(
      std::span<const std::pair<std::string, std::string>> id_and_response) const;

  const rsd::RefusalCorpus& corpus() const noexcept { return corpus_; }
  const rsd::Centroid& centroid() const noexcept { return centroid_; }
  const std::vector<CompositeFeature>& reference_features() const noexcept { return references_; }
  const DetectorConfig& config() const noexcept { return config_; }
  const isoforest::ForestConfig& forest_config() const noexcept { return forest_; }
  const std::string& config_digest() const noexcept { return digest_; }
  void set_config_digest(std::string digest) { digest_ = std::move(digest); }

 private:
  struct TargetFeature {
    extraction::SalientSentence salient;
    CompositeFeature feature;
    double d_emb = 0.0;
    double d_neg_summary = 0.0;
  };

  void init();
  TargetFeature featurize_target(std::string_view response_text) const;
  std::vector<std::uint64_t> reference_keys() const;

  rsd::RefusalCorpus corpus_;
  rsd::Centroid centroid_;
  Backends backends_;
  DetectorConfig config_;
  isoforest::ForestConfig forest_;
  std::vector<CompositeFeature> references_;
  std::string digest_;
};

// One-shot form: builds the reference population for this call only.
Verdict detect(std::string_view response_text, const rsd::RefusalCorpus& corpus,
               const rsd::Centroid& centroid, const Backends& backends,
               const DetectorConfig& config = {}, const isoforest::ForestConfig& forest = {});

}  // namespace jbdetect::detector

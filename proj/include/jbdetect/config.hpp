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

// Run configuration: a flat `key = value` document ('#' starts a comment)
// merged with command-line overrides. Unknown keys are errors.
//
//   backend               mock | remote
//   embedding_dim         mock embedder dimension (768)
//   generate_url, embed_url, score_url, classify_url, model, api_key_env,
//   timeout_seconds, max_retries, max_input_words
//   neg_reduction         max | mean | tile
//   include_self_score    true | false
//   population_mode       per_target | batch
//   num_trees, subsample_size, max_depth
//   temperature, top_p, max_tokens
//   seed                  global seed for generation, perturbation and forests
//   levels                comma-separated perturbation rates
//   variants, responses_per_prompt, workers, strict_length

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "jbdetect/backends.hpp"
#include "jbdetect/detector.hpp"
#include "jbdetect/isoforest.hpp"
#include "jbdetect/remote_backends.hpp"

namespace jbdetect {

struct RunConfig {
  std::string backend = "mock";
  std::size_t embedding_dim = 768;
  RemoteOptions remote;
  detector::DetectorConfig detector;
  isoforest::ForestConfig forest;
  GenerationConfig generation;
  std::vector<double> levels{0.01, 0.03, 0.05, 0.10, 0.15, 0.25};
  int variants = 10;
  int responses_per_prompt = 10;
  std::uint64_t seed = 47;
  int workers = 1;
  bool strict_length = false;

  // Throws Error(kConfig) for an unknown key or unparsable value.
  void set(std::string_view key, std::string_view value);
  void merge_file(const std::filesystem::path& path);
  static RunConfig load(const std::filesystem::path& path);

  // Seeds and worker counts propagated into the nested configs.
  isoforest::ForestConfig effective_forest() const;
  GenerationConfig effective_generation() const;

  // Canonical `key = value` listing of every field, in a fixed order.
  std::string dump() const;
  // 16 hex digits identifying dump().
  std::string digest() const;

  Backends make_backends() const;
};

}  // namespace jbdetect

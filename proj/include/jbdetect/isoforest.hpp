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

// Isolation Forest with axis-aligned random splits.
//
// Tree t draws from Rng(derive_seed(config.seed, t)). Its subsample is the
// `subsample_size` points with the smallest derive_seed(tree_seed, key)
// (ties: lower index), where key defaults to the point's index; passing
// stable keys makes the fitted forest independent of input order. Nodes are
// grown depth-first, left before right. An internal node draws a split
// dimension uniformly from the dimensions that are not constant over its
// points (index = uniform_index(rng, count) into the ascending list), then a
// threshold lo + (hi - lo) * uniform_unit(rng) (replaced by lo if rounding
// reaches hi). Points with x <= threshold go left. A node becomes a leaf when
// it holds one point, all its points coincide, or it sits at the depth cap.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace jbdetect::isoforest {

struct ForestConfig {
  int num_trees = 100;
  // 0: min(256, dataset size).
  std::size_t subsample_size = 0;
  // 0: ceil(log2(subsample size)).
  int max_depth = 0;
  std::uint64_t seed = 47;
  // Trees are built on up to this many threads; results do not depend on it.
  int workers = 1;
};

struct Node {
  int dim = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::uint32_t size = 0;  // training points that reached this node
  std::uint32_t depth = 0;

  bool is_leaf() const noexcept { return dim < 0; }
};

struct IsolationTree {
  std::vector<Node> nodes;  // nodes[0] is the root
  std::vector<std::size_t> sample;  // indices of the training points used

  int depth() const noexcept;
  std::size_t leaf_count() const noexcept;
};

// Average unsuccessful-search path length in a binary search tree of m
// points: 2 H(m - 1) - 2 (m - 1) / m for m > 2, 1 for m = 2, 0 below.
double average_path_length(std::size_t m) noexcept;
double harmonic(std::size_t k) noexcept;

class IsolationForestModel {
 public:
  IsolationForestModel() = default;

  const ForestConfig& config() const noexcept { return config_; }
  std::size_t fit_size() const noexcept { return fit_size_; }
  std::size_t subsample_size() const noexcept { return subsample_size_; }
  int max_depth() const noexcept { return max_depth_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<IsolationTree>& trees() const noexcept { return trees_; }

  // Edges to the reached leaf plus average_path_length(leaf size).
  double path_length(std::size_t tree, std::span<const double> point) const;
  double mean_path_length(std::span<const double> point) const;
  // 2^(-E[h(x)] / c(subsample size)), in (0, 1].
  double anomaly_score(std::span<const double> point) const;
  std::vector<double> anomaly_scores(std::span<const std::vector<double>> points) const;

  // Debug dump (not a stable format).
  std::string to_json() const;

 private:
  friend IsolationForestModel fit(std::span<const std::vector<double>>, const ForestConfig&,
                                  std::span<const std::uint64_t>);

  void check_point(std::span<const double> point) const;

  ForestConfig config_;
  std::size_t fit_size_ = 0;
  std::size_t subsample_size_ = 0;
  int max_depth_ = 0;
  std::size_t dim_ = 0;
  std::vector<IsolationTree> trees_;
};

// Errors: kTooFewPoints (< 2), kDimensionMismatch, kNonFiniteInput,
// kInvalidArgument (bad config or key count).
IsolationForestModel fit(std::span<const std::vector<double>> points, const ForestConfig& config,
                         std::span<const std::uint64_t> keys = {});

// Indices of the ceil(contamination * n) highest scores, ties to the lower
// index, returned in ascending index order. A product within 1e-9 of an
// integer counts as that integer. Throws Error(kInvalidContamination) unless
// 0 < contamination < 1, Error(kEmptyInput) for no scores.
std::vector<std::size_t> flag_outliers(std::span<const double> scores, double contamination);

std::size_t outlier_count(std::size_t n, double contamination);

}  // namespace jbdetect::isoforest

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

#include "jbdetect/isoforest.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>
#include <thread>

#include "jbdetect/error.hpp"
#include "jbdetect/kernels.hpp"
#include "jbdetect/random.hpp"

namespace jbdetect::isoforest {
namespace {

class TreeBuilder {
 public:
  TreeBuilder(std::span<const std::vector<double>> points, std::uint64_t seed, int max_depth)
      : points_(points), rng_(seed), max_depth_(max_depth),
        lo_(points.front().size()), hi_(points.front().size()) {}

  std::int32_t build(IsolationTree& tree, const std::vector<std::size_t>& idx, std::uint32_t depth) {
    const auto id = static_cast<std::int32_t>(tree.nodes.size());
    Node node;
    node.size = static_cast<std::uint32_t>(idx.size());
    node.depth = depth;
    tree.nodes.push_back(node);
    if (idx.size() <= 1 || static_cast<int>(depth) >= max_depth_) return id;

    std::copy(points_[idx[0]].begin(), points_[idx[0]].end(), lo_.begin());
    std::copy(points_[idx[0]].begin(), points_[idx[0]].end(), hi_.begin());
    for (std::size_t k = 1; k < idx.size(); ++k) kernels::min_max(lo_, hi_, points_[idx[k]]);

    std::size_t splittable = 0;
    for (std::size_t d = 0; d < lo_.size(); ++d) splittable += lo_[d] < hi_[d];
    if (splittable == 0) return id;

    std::uint64_t pick = uniform_index(rng_, splittable);
    std::size_t dim = 0;
    for (;; ++dim) {
      if (lo_[dim] < hi_[dim]) {
        if (pick == 0) break;
        --pick;
      }
    }
    double threshold = lo_[dim] + (hi_[dim] - lo_[dim]) * uniform_unit(rng_);
    if (threshold >= hi_[dim]) threshold = lo_[dim];

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : idx) (points_[i][dim] <= threshold ? left : right).push_back(i);

    const std::int32_t l = build(tree, left, depth + 1);
    const std::int32_t r = build(tree, right, depth + 1);
    Node& n = tree.nodes[static_cast<std::size_t>(id)];
    n.dim = static_cast<int>(dim);
    n.threshold = threshold;
    n.left = l;
    n.right = r;
    return id;
  }

 private:
  std::span<const std::vector<double>> points_;
  Rng rng_;
  int max_depth_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

std::vector<std::size_t> draw_subsample(std::size_t n, std::size_t size, std::uint64_t tree_seed,
                                        std::span<const std::uint64_t> keys) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (size >= n) return idx;
  std::vector<std::uint64_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    rank[i] = derive_seed(tree_seed, keys.empty() ? static_cast<std::uint64_t>(i) : keys[i]);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

int IsolationTree::depth() const noexcept {
  std::uint32_t d = 0;
  for (const auto& n : nodes) d = std::max(d, n.depth);
  return static_cast<int>(d);
}

std::size_t IsolationTree::leaf_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.is_leaf(); }));
}

double harmonic(std::size_t k) noexcept {
  double h = 0.0;
  for (std::size_t i = k; i >= 1; --i) h += 1.0 / static_cast<double>(i);
  return h;
}

double average_path_length(std::size_t m) noexcept {
  if (m <= 1) return 0.0;
  if (m == 2) return 1.0;
  const auto md = static_cast<double>(m);
  return 2.0 * harmonic(m - 1) - 2.0 * (md - 1.0) / md;
}

void IsolationForestModel::check_point(std::span<const double> point) const {
  if (point.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "point has dim " + std::to_string(point.size()) +
                                                   ", model expects " + std::to_string(dim_));
  }
}

double IsolationForestModel::path_length(std::size_t tree, std::span<const double> point) const {
  check_point(point);
  const auto& nodes = trees_.at(tree).nodes;
  std::size_t cur = 0;
  double edges = 0.0;
  while (!nodes[cur].is_leaf()) {
    const Node& n = nodes[cur];
    cur = static_cast<std::size_t>(point[static_cast<std::size_t>(n.dim)] <= n.threshold ? n.left : n.right);
    edges += 1.0;
  }
  return edges + average_path_length(nodes[cur].size);
}

double IsolationForestModel::mean_path_length(std::span<const double> point) const {
  double s = 0.0;
  for (std::size_t t = 0; t < trees_.size(); ++t) s += path_length(t, point);
  return s / static_cast<double>(trees_.size());
}

double IsolationForestModel::anomaly_score(std::span<const double> point) const {
  const double c = average_path_length(subsample_size_);
  return std::exp2(-mean_path_length(point) / c);
}

std::vector<double> IsolationForestModel::anomaly_scores(std::span<const std::vector<double>> points) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(anomaly_score(p));
  return out;
}

std::string IsolationForestModel::to_json() const {
  nlohmann::json j;
  j["num_trees"] = trees_.size();
  j["fit_size"] = fit_size_;
  j["subsample_size"] = subsample_size_;
  j["max_depth"] = max_depth_;
  j["dim"] = dim_;
  j["seed"] = config_.seed;
  j["trees"] = nlohmann::json::array();
  for (const auto& t : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"leaf", true}, {"size", n.size}, {"depth", n.depth}});
      } else {
        nodes.push_back({{"dim", n.dim}, {"threshold", n.threshold}, {"left", n.left},
                         {"right", n.right}, {"size", n.size}, {"depth", n.depth}});
      }
    }
    j["trees"].push_back({{"nodes", std::move(nodes)}});
  }
  return j.dump();
}

IsolationForestModel fit(std::span<const std::vector<double>> points, const ForestConfig& config,
                         std::span<const std::uint64_t> keys) {
  if (points.size() < 2) throw Error(ErrorCode::kTooFewPoints, "isolation forest needs >= 2 points");
  if (config.num_trees < 1) throw Error(ErrorCode::kInvalidArgument, "num_trees must be >= 1");
  if (config.max_depth < 0) throw Error(ErrorCode::kInvalidArgument, "max_depth must be >= 0");
  if (!keys.empty() && keys.size() != points.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one key per point required");
  }
  const std::size_t dim = points.front().size();
  if (dim == 0) throw Error(ErrorCode::kDimensionMismatch, "points have zero dimensions");
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "points differ in dimension");
    for (double x : p) {
      if (!std::isfinite(x)) throw Error(ErrorCode::kNonFiniteInput, "non-finite coordinate");
    }
  }

  IsolationForestModel m;
  m.config_ = config;
  m.fit_size_ = points.size();
  m.dim_ = dim;
  m.subsample_size_ = config.subsample_size == 0 ? std::min<std::size_t>(256, points.size())
                                                 : config.subsample_size;
  if (m.subsample_size_ > points.size()) {
    throw Error(ErrorCode::kInvalidArgument, "subsample_size exceeds dataset size");
  }
  m.max_depth_ = config.max_depth > 0
                     ? config.max_depth
                     : static_cast<int>(std::ceil(std::log2(static_cast<double>(m.subsample_size_))));
  m.trees_.resize(static_cast<std::size_t>(config.num_trees));

  auto build_tree = [&](std::size_t t) {
    const std::uint64_t tree_seed = derive_seed(config.seed, static_cast<std::uint64_t>(t));
    IsolationTree& tree = m.trees_[t];
    tree.sample = draw_subsample(points.size(), m.subsample_size_, tree_seed, keys);
    TreeBuilder builder(points, tree_seed, m.max_depth_);
    builder.build(tree, tree.sample, 0);
  };

  const std::size_t n_trees = m.trees_.size();
  const auto workers = static_cast<std::size_t>(std::clamp(config.workers, 1, 64));
  if (workers == 1 || n_trees == 1) {
    for (std::size_t t = 0; t < n_trees; ++t) build_tree(t);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n_trees); ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < n_trees; t += workers) build_tree(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  return m;
}

std::size_t outlier_count(std::size_t n, double contamination) {
  const double x = contamination * static_cast<double>(n);
  const double nearest = std::round(x);
  const double k = std::abs(x - nearest) <= 1e-9 ? nearest : std::ceil(x);
  return std::min(n, static_cast<std::size_t>(std::max(1.0, k)));
}

std::vector<std::size_t> flag_outliers(std::span<const double> scores, double contamination) {
  if (!(contamination > 0.0 && contamination < 1.0)) {
    throw Error(ErrorCode::kInvalidContamination, "contamination must be in (0, 1)");
  }
  if (scores.empty()) throw Error(ErrorCode::kEmptyInput, "no scores to flag");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(outlier_count(scores.size(), contamination));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace jbdetect::isoforest

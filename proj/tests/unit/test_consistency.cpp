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

#include <doctest.h>

#include <cmath>
#include <functional>

#include "jbdetect/consistency.hpp"
#include "jbdetect/error.hpp"
#include "jbdetect/mock_backends.hpp"

using namespace jbdetect;
using consistency::Metric;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIo;
}

// Embedder returning fixed vectors keyed by text.
class TableEmbedder final : public Embedder {
 public:
  std::size_t dim() const override { return 2; }

 protected:
  std::vector<EmbeddingVector> do_embed(std::span<const std::string> texts) const override {
    std::vector<EmbeddingVector> out;
    for (const auto& t : texts) out.emplace_back(t == "x" ? std::vector<double>{1, 0} : std::vector<double>{0, 1});
    return out;
  }
};

}  // namespace

TEST_CASE("worked three-response case") {
  consistency::SimilarityMatrix m(Metric::kNeg, 3);
  m(0, 1) = 0.9; m(0, 2) = 0.5;
  m(1, 0) = 0.9; m(1, 2) = 0.7;
  m(2, 0) = 0.5; m(2, 1) = 0.7;
  const auto means = consistency::one_vs_all_means(m);
  CHECK(means[0] == doctest::Approx(0.7));
  CHECK(means[1] == doctest::Approx(0.8));
  CHECK(means[2] == doctest::Approx(0.6));
  CHECK(consistency::mu_max(m) == doctest::Approx(0.8));
}

TEST_CASE("constant and two-response matrices") {
  consistency::SimilarityMatrix c(Metric::kNeg, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i != j) c(i, j) = 0.3;
    }
  }
  for (double v : consistency::one_vs_all_means(c)) CHECK(v == doctest::Approx(0.3));

  consistency::SimilarityMatrix two(Metric::kNeg, 2);
  two(0, 1) = 0.25;
  two(1, 0) = -0.5;
  const auto means = consistency::one_vs_all_means(two);
  CHECK(means[0] == 0.25);
  CHECK(means[1] == -0.5);
}

TEST_CASE("diagonal conventions") {
  const consistency::SimilarityMatrix neg(Metric::kNeg, 2);
  CHECK(std::isnan(neg(0, 0)));
  const consistency::SimilarityMatrix cos(Metric::kCos, 2);
  CHECK(cos(1, 1) == 1.0);
}

TEST_CASE("cos matrix over identical responses is all ones") {
  const Backends b = make_mock_backends();
  const consistency::ResponseSet set{"p", {"I cannot help.", "I cannot help.", "I cannot help."}};
  const auto m = consistency::pairwise_matrix(set, Metric::kCos, b);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) CHECK(m(i, j) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  CHECK(consistency::mu_max(m) == doctest::Approx(1.0));
}

TEST_CASE("orthogonal embeddings give zero cosine") {
  Backends b;
  b.embedder = std::make_shared<TableEmbedder>();
  const consistency::ResponseSet set{"p", {"x", "y"}};
  const auto m = consistency::pairwise_matrix(set, Metric::kCos, b);
  CHECK(m(0, 1) == 0.0);
  CHECK(m(1, 0) == 0.0);
}

TEST_CASE("neg matrix is stored fully directed") {
  const Backends b = make_mock_backends();
  const consistency::ResponseSet set{"p", {"I cannot help with that", "Sure, here is how you do that step by step"}};
  const auto m = consistency::pairwise_matrix(set, Metric::kNeg, b);
  const MockPairScorer s;
  CHECK(m(0, 1) == s.score(set.responses[0], set.responses[1]));
  CHECK(m(1, 0) == s.score(set.responses[1], set.responses[0]));
  CHECK(m(0, 1) != m(1, 0));
}

TEST_CASE("pairwise_matrix preconditions") {
  const Backends b = make_mock_backends();
  CHECK(code_of([&] { consistency::pairwise_matrix({"p", {"only"}}, Metric::kNeg, b); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { consistency::pairwise_matrix({"p", {"a", " "}}, Metric::kNeg, b); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("truncation to the backend input limit is recorded") {
  bool cut = false;
  CHECK(consistency::truncate_words("a b c d", 2, &cut) == "a b");
  CHECK(cut);
  CHECK(consistency::truncate_words("a b", 0, &cut) == "a b");
  CHECK_FALSE(cut);

  MockOptions opt;
  Backends b = make_mock_backends(opt);
  auto limited = std::make_shared<MockEmbedder>(768, 47);
  limited->set_max_input_words(3);
  b.embedder = limited;
  const auto m = consistency::pairwise_matrix({"p", {"one two three four", "one two"}}, Metric::kCos, b);
  CHECK(m.truncated == std::vector<bool>{true, false});
}

TEST_CASE("percentile uses linear interpolation") {
  CHECK(consistency::percentile({0.0, 1.0}, 0.25) == doctest::Approx(0.25));
  CHECK(consistency::percentile({1.0, 0.0}, 0.75) == doctest::Approx(0.75));
  CHECK(consistency::percentile({3.0, 1.0, 2.0, 4.0}, 0.5) == doctest::Approx(2.5));
  CHECK(consistency::percentile({5.0}, 0.9) == 5.0);
}

TEST_CASE("aggregate_levels") {
  const auto stats = consistency::aggregate_levels({{1.0, {0.5}}, {0.25, {0.0, 1.0}}});
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].level == 0.25);
  CHECK(stats[0].mean == doctest::Approx(0.5));
  CHECK(stats[0].q25 == doctest::Approx(0.25));
  CHECK(stats[0].q75 == doctest::Approx(0.75));
  CHECK(stats[0].count == 2);
  CHECK(stats[1].mean == 0.5);
  CHECK(stats[1].q25 == 0.5);
  CHECK(stats[1].q75 == 0.5);
  CHECK(code_of([] { consistency::aggregate_levels({{0.1, {}}}); }) == ErrorCode::kEmptyLevel);
}

TEST_CASE("metric names") {
  CHECK(consistency::parse_metric("neg") == Metric::kNeg);
  CHECK(consistency::parse_metric("cos") == Metric::kCos);
  CHECK_FALSE(consistency::parse_metric("l2").has_value());
}

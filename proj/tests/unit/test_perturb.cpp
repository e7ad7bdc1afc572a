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

#include <algorithm>
#include <functional>
#include <set>

#include "jbdetect/error.hpp"
#include "jbdetect/perturb.hpp"
#include "jbdetect/text.hpp"

using namespace jbdetect;
using perturb::Kind;

namespace {

std::string twenty_tokens() {
  std::vector<std::string> w;
  for (int i = 0; i < 20; ++i) w.push_back("w" + std::to_string(i));
  return text::join(w);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("affected count rounds half up and clamps to one") {
  CHECK(perturb::affected_count(0.10, 20) == 2);
  CHECK(perturb::affected_count(0.25, 20) == 5);
  CHECK(perturb::affected_count(0.01, 1) == 1);
  CHECK(perturb::affected_count(0.15, 10) == 2);  // 1.5 rounds up
  CHECK(perturb::affected_count(0.05, 10) == 1);  // 0.5 rounds up
  CHECK(perturb::affected_count(0.04, 10) == 1);  // clamp
  CHECK(perturb::affected_count(1.0, 7) == 7);
  CHECK(perturb::swap_pair_count(0.25, 20) == 3);  // 2.5 rounds up
  CHECK(perturb::swap_pair_count(0.01, 20) == 1);
}

TEST_CASE("insert: 20 tokens at 10% gives 22 with the original as a subsequence") {
  const perturb::Perturber p;
  Rng rng(1);
  const auto out = text::split_words(p.insert(twenty_tokens(), 0.10, rng));
  REQUIRE(out.size() == 22);
  const auto orig = text::split_words(twenty_tokens());
  std::size_t i = 0;
  for (const auto& w : out) {
    if (i < orig.size() && w == orig[i]) ++i;
  }
  CHECK(i == orig.size());
}

TEST_CASE("insert clamps k to one for a one-token prompt") {
  const perturb::Perturber p;
  Rng rng(2);
  CHECK(text::word_count(p.insert("hello", 0.01, rng)) == 2);
}

TEST_CASE("patch: exactly k positions change") {
  const perturb::Perturber p;
  Rng rng(3);
  const auto orig = text::split_words(twenty_tokens());
  const auto out = text::split_words(p.patch(twenty_tokens(), 0.25, rng));
  REQUIRE(out.size() == 20);
  std::size_t diff = 0;
  for (std::size_t i = 0; i < 20; ++i) diff += out[i] != orig[i];
  CHECK(diff == 5);

  Rng all(4);
  const auto every = text::split_words(p.patch(twenty_tokens(), 1.0, all));
  for (std::size_t i = 0; i < 20; ++i) CHECK(every[i] != orig[i]);
}

TEST_CASE("patch replaces pool words with a different pool word") {
  const perturb::Perturber p({"alpha", "beta"});
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    CHECK(p.patch("alpha", 1.0, rng) == "beta");
  }
}

TEST_CASE("swap: a two-token prompt exchanges its tokens") {
  const perturb::Perturber p;
  Rng rng(5);
  CHECK(p.swap("first second", 0.25, rng) == "second first");
  CHECK(code_of([&] { p.swap("alone", 0.5, rng); }) == ErrorCode::kTooShortPrompt);
}

TEST_CASE("swap preserves the token multiset") {
  const perturb::Perturber p;
  Rng rng(6);
  auto a = text::split_words(twenty_tokens());
  auto b = text::split_words(p.swap(twenty_tokens(), 0.25, rng));
  std::size_t diff = 0;
  for (std::size_t i = 0; i < 20; ++i) diff += a[i] != b[i];
  CHECK(diff == 6);  // three disjoint pairs of distinct tokens
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("operators are deterministic per rng state") {
  const perturb::Perturber p;
  for (auto kind : {Kind::kInsert, Kind::kPatch, Kind::kSwap}) {
    Rng a(77), b(77);
    CHECK(p.apply(kind, twenty_tokens(), 0.15, a) == p.apply(kind, twenty_tokens(), 0.15, b));
  }
}

TEST_CASE("invalid inputs") {
  const perturb::Perturber p;
  Rng rng(8);
  CHECK(code_of([&] { p.insert("   ", 0.1, rng); }) == ErrorCode::kEmptyPrompt);
  CHECK(code_of([&] { p.insert("a b", 0.0, rng); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { p.insert("a b", 1.5, rng); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { perturb::Perturber({"same", "same"}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { perturb::Perturber({"two words", "x"}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("generate_variants") {
  const perturb::Perturber p;
  perturb::PerturbationSpec spec{Kind::kSwap, 0.25, 10, 47};
  const auto v = p.generate_variants("p1", twenty_tokens(), spec);
  REQUIRE(v.size() == 10);
  std::set<std::string> texts;
  for (int i = 0; i < 10; ++i) {
    CHECK(v[static_cast<std::size_t>(i)].variant_index == i);
    CHECK(v[static_cast<std::size_t>(i)].original_id == "p1");
    CHECK(v[static_cast<std::size_t>(i)].rate == 0.25);
    texts.insert(v[static_cast<std::size_t>(i)].text);
  }
  CHECK(texts.size() > 1);
  CHECK(p.generate_variants("p1", twenty_tokens(), spec)[3].text == v[3].text);

  // Variant i uses its own derived stream.
  Rng rng(derive_seed(47, 3));
  CHECK(p.swap(twenty_tokens(), 0.25, rng) == v[3].text);

  const auto one = p.generate_variants("p2", "a b c", {Kind::kInsert, 0.01, 1, 0});
  CHECK(one.size() == 1);
  CHECK(code_of([&] { p.generate_variants("x", "a b", {Kind::kInsert, 0.1, 0, 1}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("kind names round trip") {
  for (auto kind : {Kind::kInsert, Kind::kPatch, Kind::kSwap}) {
    CHECK(perturb::parse_kind(perturb::kind_name(kind)) == kind);
  }
  CHECK_FALSE(perturb::parse_kind("shuffle").has_value());
  CHECK(perturb::default_word_pool().size() == 50);
}

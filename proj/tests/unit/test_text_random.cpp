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

#include <set>

#include "jbdetect/error.hpp"
#include "jbdetect/random.hpp"
#include "jbdetect/text.hpp"

using namespace jbdetect;

TEST_CASE("split_words keeps punctuation attached") {
  const auto w = text::split_words("  I cannot,\thelp.\n Sorry!  ");
  REQUIRE(w.size() == 4);
  CHECK(w[0] == "I");
  CHECK(w[1] == "cannot,");
  CHECK(w[3] == "Sorry!");
  CHECK(text::word_count("") == 0);
  CHECK(text::word_count("one") == 1);
}

TEST_CASE("normalize_word strips edges and folds case") {
  CHECK(text::normalize_word("\"Hello,") == "hello");
  CHECK(text::normalize_word("can't") == "can't");
  CHECK(text::normalize_word("CAN\xE2\x80\x99T") == "can't");
  CHECK(text::normalize_word("...") == "");
}

TEST_CASE("phrase matching over normalized words") {
  const auto words = text::normalized_words("I will not, and I WILL NOT.");
  CHECK(text::contains_phrase(words, "will not"));
  CHECK(text::count_phrase(words, "will not") == 2);
  CHECK_FALSE(text::contains_phrase(words, "not and will"));
  CHECK(text::contains_ci("Hello World", "WORLD"));
  CHECK_FALSE(text::contains_ci("Hello", "help"));
}

TEST_CASE("join and trim") {
  CHECK(text::join({"a", "b", "c"}) == "a b c");
  CHECK(text::join({}, ",") == "");
  CHECK(text::trim("  x y \n") == "x y");
}

TEST_CASE("fnv1a64 matches published test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("mt19937_64 reference output") {
  // The 10000th output of a default-seeded mt19937_64 is fixed by the standard.
  Rng rng;
  rng.discard(9999);
  CHECK(rng() == 9981545732273789042ULL);
}

TEST_CASE("uniform_index stays in range and covers it") {
  Rng rng(3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto x = uniform_index(rng, 7);
    REQUIRE(x < 7);
    seen.insert(x);
  }
  CHECK(seen.size() == 7);
  CHECK(uniform_index(rng, 1) == 0);
}

TEST_CASE("uniform_unit lies in [0, 1)") {
  Rng rng(5);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform_unit(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(47, 0) != derive_seed(47, 1));
  CHECK(derive_seed(47, 0) != derive_seed(48, 0));
  CHECK(derive_seed(47, "abc") == derive_seed(47, fnv1a64("abc")));
  CHECK(derive_seed(47, 5) == derive_seed(47, 5));
}

TEST_CASE("error codes have stable names") {
  CHECK(error_code_name(ErrorCode::kEmptyInput) == "empty-input");
  CHECK(error_code_name(ErrorCode::kCorpusTooSmall) == "corpus-too-small");
  const RateLimitedError e("slow down", 2.5);
  CHECK(e.code() == ErrorCode::kRateLimited);
  CHECK(e.retry_after_seconds() == 2.5);
}

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
#include <cstdlib>
#include <vector>

#include "jbdetect/error.hpp"
#include "jbdetect/kernels.hpp"
#include "support/synthetic.hpp"

using namespace jbdetect;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = testing::uniform(rng, -10.0, 10.0);
  return v;
}

// Lengths straddling every vector-width remainder.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 100, 768, 2304, 2305};

}  // namespace

TEST_CASE("scalar table is always available") {
  const auto& t = kernels::scalar_table();
  CHECK(t.isa == kernels::Isa::kScalar);
  CHECK(kernels::cpu_supports(kernels::Isa::kScalar));
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const auto* simd = kernels::avx2_table();
  if (simd == nullptr) {
    MESSAGE("AVX2 unavailable on this build or CPU; equivalence test skipped");
    return;
  }
  const auto& ref = kernels::scalar_table();
  Rng rng(11);
  for (std::size_t n : kLengths) {
    CAPTURE(n);
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);

    // dot: reassociated sum; bound the error by n * eps * sum|a_i b_i|.
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
    CHECK(std::abs(simd->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <=
          (static_cast<double>(n) + 1.0) * 2.3e-16 * mag);

    // Element-wise kernels must be bit-identical.
    auto x1 = a, x2 = a;
    ref.add(x1.data(), b.data(), n);
    simd->add(x2.data(), b.data(), n);
    CHECK(x1 == x2);

    x1 = a;
    x2 = a;
    ref.axpy(x1.data(), 0.37, b.data(), n);
    simd->axpy(x2.data(), 0.37, b.data(), n);
    CHECK(x1 == x2);

    x1 = a;
    x2 = a;
    ref.scale(x1.data(), -1.5, n);
    simd->scale(x2.data(), -1.5, n);
    CHECK(x1 == x2);

    auto lo1 = a, hi1 = a, lo2 = a, hi2 = a;
    ref.min_max(lo1.data(), hi1.data(), b.data(), n);
    simd->min_max(lo2.data(), hi2.data(), b.data(), n);
    CHECK(lo1 == lo2);
    CHECK(hi1 == hi2);
  }
}

TEST_CASE("min_max oracle") {
  std::vector<double> lo{1, 5, -2}, hi{1, 5, -2};
  const std::vector<double> x{0, 9, -2};
  kernels::min_max(lo, hi, x);
  CHECK(lo == std::vector<double>{0, 5, -2});
  CHECK(hi == std::vector<double>{1, 9, -2});
}

TEST_CASE("selecting an ISA switches the active table") {
  kernels::select(kernels::Isa::kScalar);
  CHECK(kernels::active().isa == kernels::Isa::kScalar);
  CHECK(kernels::active_name() == "scalar");
  if (kernels::avx2_table() != nullptr) {
    kernels::select(kernels::Isa::kAvx2);
    CHECK(kernels::active().isa == kernels::Isa::kAvx2);
  } else {
    CHECK_THROWS_AS(kernels::select(kernels::Isa::kAvx2), Error);
  }
}

TEST_CASE("cosine similarity worked cases") {
  const std::vector<double> a{1, 1}, b{1, 0}, c{0, 1}, z{0, 0};
  CHECK(kernels::cosine_similarity(a, b) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(kernels::cosine_similarity(b, c) == 0.0);
  CHECK(kernels::cosine_similarity(a, a) == doctest::Approx(1.0));
  CHECK(kernels::cosine_similarity(a, a) <= 1.0);
  try {
    kernels::cosine_similarity(a, z);
    FAIL("expected zero-vector error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroVector);
  }
  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(kernels::cosine_similarity(a, three), Error);
}

TEST_CASE("mean_rows is the element-wise mean") {
  const std::vector<std::vector<double>> rows{{1, 0}, {0, 1}};
  CHECK(kernels::mean_rows(rows) == std::vector<double>{0.5, 0.5});
}

TEST_CASE("dot and squared_norm") {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  CHECK(kernels::dot(a, b) == 32.0);
  CHECK(kernels::squared_norm(a) == 14.0);
  const std::vector<double> shorter{1};
  CHECK_THROWS_AS(kernels::dot(a, shorter), Error);
}

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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "jbdetect/error.hpp"
#include "jbdetect/kernels.hpp"
#include "kernels_internal.hpp"

namespace jbdetect::kernels {
namespace {

const KernelTable kScalar{Isa::kScalar,       "scalar",
                          detail::dot_scalar, detail::add_scalar,
                          detail::axpy_scalar, detail::scale_scalar,
                          detail::min_max_scalar};

#if defined(JBDETECT_HAVE_AVX2)
const KernelTable kAvx2{Isa::kAvx2,         "avx2",
                        detail::dot_avx2,   detail::add_avx2,
                        detail::axpy_avx2,  detail::scale_avx2,
                        detail::min_max_avx2};
#endif

const KernelTable* pick_default() {
  if (const char* env = std::getenv("JBDETECT_KERNELS")) {
    if (std::string(env) == "scalar") return &kScalar;
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

bool cpu_supports(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(JBDETECT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* avx2_table() noexcept {
#if defined(JBDETECT_HAVE_AVX2)
  if (cpu_supports(Isa::kAvx2)) return &kAvx2;
#endif
  return nullptr;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

void select(Isa isa) {
  const KernelTable* t = isa == Isa::kScalar ? &kScalar : avx2_table();
  if (t == nullptr) throw Error(ErrorCode::kInvalidArgument, "requested SIMD kernels unavailable");
  current().store(t, std::memory_order_relaxed);
}

std::string_view active_name() noexcept { return active().name; }

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return active().dot(a.data(), b.data(), a.size());
}

double squared_norm(std::span<const double> a) {
  return active().dot(a.data(), a.data(), a.size());
}

void add(std::span<double> acc, std::span<const double> x) {
  require_same_size(acc.size(), x.size());
  active().add(acc.data(), x.data(), x.size());
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  require_same_size(y.size(), x.size());
  active().axpy(y.data(), a, x.data(), x.size());
}

void scale(std::span<double> x, double s) { active().scale(x.data(), s, x.size()); }

void min_max(std::span<double> lo, std::span<double> hi, std::span<const double> x) {
  require_same_size(lo.size(), x.size());
  require_same_size(hi.size(), x.size());
  active().min_max(lo.data(), hi.data(), x.data(), x.size());
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  const double na = squared_norm(a);
  const double nb = squared_norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw Error(ErrorCode::kZeroVector, "cosine similarity of a zero vector");
  }
  const double c = dot(a, b) / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

std::vector<double> mean_rows(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "mean of zero rows");
  std::vector<double> acc(rows.front().size(), 0.0);
  for (const auto& r : rows) add(acc, r);
  scale(acc, 1.0 / static_cast<double>(rows.size()));
  return acc;
}

}  // namespace jbdetect::kernels

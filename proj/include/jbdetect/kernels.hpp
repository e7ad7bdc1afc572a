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

// Dense double-precision vector kernels with a portable scalar reference and
// SIMD variants chosen at runtime. Every variant computes the same function;
// reductions (dot) may differ from the scalar result by summation order only.
//
// Set JBDETECT_KERNELS=scalar in the environment to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace jbdetect::kernels {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // acc[i] += x[i]
  void (*add)(double* acc, const double* x, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // x[i] *= s
  void (*scale)(double* x, double s, std::size_t n);
  // lo[i] = min(lo[i], x[i]); hi[i] = max(hi[i], x[i])
  void (*min_max)(double* lo, double* hi, const double* x, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
// Null when the build or the running CPU lacks the instruction set.
const KernelTable* avx2_table() noexcept;

bool cpu_supports(Isa isa) noexcept;

// The table all free functions below dispatch through.
const KernelTable& active() noexcept;
// Overrides the runtime choice; throws Error(kInvalidArgument) if `isa` is not
// usable here. Intended for tests and benchmarks.
void select(Isa isa);
std::string_view active_name() noexcept;

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
void add(std::span<double> acc, std::span<const double> x);
void axpy(std::span<double> y, double a, std::span<const double> x);
void scale(std::span<double> x, double s);
void min_max(std::span<double> lo, std::span<double> hi, std::span<const double> x);

// (a . b) / (|a| |b|), clamped to [-1, 1]. Throws Error(kZeroVector) when
// either norm is zero and Error(kDimensionMismatch) on length mismatch.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Arithmetic mean of equal-length rows.
std::vector<double> mean_rows(std::span<const std::vector<double>> rows);

}  // namespace jbdetect::kernels

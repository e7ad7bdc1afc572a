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

#include <cstddef>

namespace jbdetect::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void add_scalar(double* acc, const double* x, std::size_t n);
void axpy_scalar(double* y, double a, const double* x, std::size_t n);
void scale_scalar(double* x, double s, std::size_t n);
void min_max_scalar(double* lo, double* hi, const double* x, std::size_t n);

#if defined(JBDETECT_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void add_avx2(double* acc, const double* x, std::size_t n);
void axpy_avx2(double* y, double a, const double* x, std::size_t n);
void scale_avx2(double* x, double s, std::size_t n);
void min_max_avx2(double* lo, double* hi, const double* x, std::size_t n);
#endif

}  // namespace jbdetect::kernels::detail

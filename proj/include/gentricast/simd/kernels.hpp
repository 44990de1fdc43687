// Copyright 2026-present the gentricast authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Arithmetic inner loops shared by the statistics, embedding and forest
// code. Each kernel has a scalar reference implementation and, on x86-64,
// an AVX2/FMA variant. The variant is picked once per process from CPUID;
// setting GENTRICAST_SIMD=scalar in the environment forces the reference
// path (useful for cross-machine bit reproducibility).
//
// The two paths accumulate in different orders, so results agree to
// rounding only. Within one process the selection is fixed, which keeps
// every seeded computation bit-reproducible.

#include <cstddef>
#include <span>
#include <string_view>

namespace gentricast::simd {

struct KernelTable {
  std::string_view name;
  float (*dot_f32)(const float* a, const float* b, std::size_t n);
  void (*axpy_f32)(float alpha, const float* x, float* y, std::size_t n);
  double (*dot_f64)(const double* a, const double* b, std::size_t n);
  double (*sum_f64)(const double* x, std::size_t n);
  // sum_i (x_i - center)^2
  double (*sum_sq_dev_f64)(const double* x, std::size_t n, double center);
  // sum_i (a_i - b_i)^2
  double (*sum_sq_diff_f64)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the variant was not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels() noexcept;

/// The table used by the wrappers below.
const KernelTable& active_kernels() noexcept;

inline float dot(std::span<const float> a, std::span<const float> b) {
  return active_kernels().dot_f32(a.data(), b.data(), a.size());
}

/// y += alpha * x
inline void axpy(float alpha, std::span<const float> x, std::span<float> y) {
  active_kernels().axpy_f32(alpha, x.data(), y.data(), x.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot_f64(a.data(), b.data(), a.size());
}

inline double sum(std::span<const double> x) {
  return active_kernels().sum_f64(x.data(), x.size());
}

inline double sum_sq_dev(std::span<const double> x, double center) {
  return active_kernels().sum_sq_dev_f64(x.data(), x.size(), center);
}

inline double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
  return active_kernels().sum_sq_diff_f64(a.data(), b.data(), a.size());
}

}  // namespace gentricast::simd

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

#include <cstdlib>
#include <string_view>

#include "gentricast/simd/kernels.hpp"

namespace gentricast::simd {

#if defined(GENTRICAST_HAVE_AVX2)
const KernelTable& avx2_kernel_table() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(GENTRICAST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() noexcept {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* env = std::getenv("GENTRICAST_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const KernelTable* avx = avx2_kernels()) return *avx;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace gentricast::simd

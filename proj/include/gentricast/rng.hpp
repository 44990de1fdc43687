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

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace gentricast {

/// SplitMix64 finalizer (Steele, Lea & Flood).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for sub-stream `stream` of `master`:
///   splitmix64(master ^ splitmix64(stream + 0x9e3779b97f4a7c15)).
/// Used for per-simulation, per-fold and per-tree seeds so that each unit
/// of work depends only on (master, index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// 64-bit FNV-1a over the tokens, with a 0xff separator between tokens.
std::uint64_t hash_tokens(std::span<const std::string> tokens) noexcept;
std::uint64_t hash_string(std::string_view s) noexcept;

/// Thin wrapper over mt19937_64 with the handful of draws the library needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return unit_(engine_); }
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  double normal(double mean = 0.0, double sd = 1.0) {
    return std::normal_distribution<double>(mean, sd)(engine_);
  }
  double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }
  std::uint64_t next() { return engine_(); }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace gentricast

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

// Run manifest: command, seed, merged config and a SHA-256 checksum per
// artifact. Contains nothing time- or host-dependent, so identical runs
// write identical manifests.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace gentricast::cli {

/// Lowercase hex digest. Throws IngestError when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view data);

class Manifest {
 public:
  Manifest(std::string command, std::optional<std::uint64_t> seed, nlohmann::json config,
           std::filesystem::path root);

  /// Records `path` (absolute or relative to the root) with its checksum.
  void add(const std::filesystem::path& path);
  const std::map<std::string, std::string>& artifacts() const noexcept { return artifacts_; }

  nlohmann::json to_json() const;
  /// Writes manifest.json under the root and returns its path.
  std::filesystem::path write() const;

 private:
  std::string command_;
  std::optional<std::uint64_t> seed_;
  nlohmann::json config_;
  std::filesystem::path root_;
  std::map<std::string, std::string> artifacts_;
};

}  // namespace gentricast::cli

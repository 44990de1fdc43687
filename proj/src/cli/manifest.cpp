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


#include "gentricast/cli/manifest.hpp"

#include <array>
#include <fstream>
#include <memory>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "gentricast/error.hpp"

namespace gentricast::cli {

namespace {

class Digest {
 public:
  Digest() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw ComputeError("sha256: digest initialisation failed");
    }
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw ComputeError("sha256: update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) {
      throw ComputeError("sha256: finalisation failed");
    }
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Digest d;
  d.update(data.data(), data.size());
  return d.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(fmt::format("cannot read '{}' for checksumming", path.string()));
  Digest d;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return d.hex();
}

Manifest::Manifest(std::string command, std::optional<std::uint64_t> seed, nlohmann::json config,
                   std::filesystem::path root)
    : command_(std::move(command)), seed_(seed), config_(std::move(config)), root_(std::move(root)) {}

void Manifest::add(const std::filesystem::path& path) {
  const auto full = path.is_absolute() ? path : root_ / path;
  const auto rel = full.lexically_relative(root_);
  const std::string key = rel.empty() || rel.native().starts_with("..") ? full.generic_string()
                                                                       : rel.generic_string();
  artifacts_[key] = sha256_file(full);
}

nlohmann::json Manifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "gentricast";
  j["command"] = command_;
  j["seed"] = seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr);
  j["config"] = config_;
  j["artifacts"] = artifacts_;
  return j;
}

std::filesystem::path Manifest::write() const {
  const auto path = root_ / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError(fmt::format("cannot write '{}'", path.string()));
  out << to_json().dump(2) << '\n';
  return path;
}

}  // namespace gentricast::cli

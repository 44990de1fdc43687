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

// Paragraph vectors, distributed bag of words (PV-DBOW), trained with
// negative sampling.
//
// Each document vector is trained to predict the words of its document
// against `negative` noise words drawn from the unigram^0.75 distribution.
// The learning rate decays linearly over the total number of word steps.
// Sequential training is bit-reproducible for a given seed. The parallel
// mode shards documents over threads that update the shared output
// vectors without locking, so its results vary from run to run.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "gentricast/topics.hpp"

namespace gentricast {

struct EmbeddingParams {
  std::size_t dim = 25;
  std::size_t epochs = 20;
  std::size_t negative = 5;
  double lr_start = 0.025;
  double lr_end = 0.0001;
  std::size_t min_count = 5;
  std::size_t infer_epochs = 20;
  std::uint64_t seed = 0;
  bool parallel = false;
  std::size_t threads = 0;  // parallel mode only; 0 = hardware concurrency

  /// Throws ConfigError.
  void validate() const;
};

struct EmbeddingModel {
  EmbeddingParams params;
  Vocabulary vocab;
  std::vector<std::uint64_t> counts;    // per vocabulary id
  std::vector<float> word_vectors;      // V x dim, output side
  std::vector<float> doc_vectors;       // N x dim, training documents
  std::size_t n_docs = 0;

  std::size_t dim() const noexcept { return params.dim; }
  std::span<const float> doc_vector(std::size_t i) const {
    return {doc_vectors.data() + i * params.dim, params.dim};
  }

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static EmbeddingModel load(std::istream& in);
  static EmbeddingModel load(const std::filesystem::path& path);
};

/// Throws ComputeError for an empty corpus or an empty vocabulary.
EmbeddingModel fit_embeddings(const std::vector<Document>& docs, const EmbeddingParams& params);

/// Vector for a new document with the output vectors frozen; seeded from
/// the model seed and the token content. All zeros when no token is in
/// the vocabulary. `epochs` 0 means the model's infer_epochs.
std::vector<float> infer_vector(const EmbeddingModel& model, const Document& doc,
                                std::size_t epochs = 0);

/// 0 when either vector is all zeros. Throws ComputeError on length mismatch.
double cosine(std::span<const float> u, std::span<const float> v);
double cosine(std::span<const double> u, std::span<const double> v);

}  // namespace gentricast

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

// Latent Dirichlet Allocation fitted by collapsed Gibbs sampling.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gentricast {

using Document = std::vector<std::string>;

/// Terms with at least `min_count` occurrences, sorted lexicographically.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> terms);
  static Vocabulary build(const std::vector<Document>& docs, std::size_t min_count);

  std::optional<std::size_t> id(const std::string& term) const;
  const std::string& term(std::size_t id) const { return terms_[id]; }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  /// In-vocabulary ids of `doc`, order preserved.
  std::vector<std::size_t> encode(const Document& doc) const;

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LdaParams {
  std::size_t k = 5;
  std::optional<double> alpha;  // default 50 / k
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::size_t burn_in = 200;
  std::size_t min_count = 5;
  std::size_t infer_iterations = 100;
  std::size_t infer_burn_in = 20;
  std::uint64_t seed = 0;

  double alpha_value() const { return alpha ? *alpha : 50.0 / static_cast<double>(k); }
  /// Throws ConfigError.
  void validate() const;
};

struct TopicModel {
  std::size_t k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t iterations = 0;
  std::size_t burn_in = 0;
  std::size_t infer_iterations = 100;
  std::size_t infer_burn_in = 20;
  std::uint64_t seed = 0;
  Vocabulary vocab;
  std::vector<double> phi;  // k x V row-major

  double phi_at(std::size_t topic, std::size_t word) const { return phi[topic * vocab.size() + word]; }

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static TopicModel load(std::istream& in);
  static TopicModel load(const std::filesystem::path& path);
};

/// Throws ComputeError for an empty corpus or k above the vocabulary size.
TopicModel fit_lda(const std::vector<Document>& docs, const LdaParams& params);

/// Topic mixture of a held-out document under frozen phi. Seeded from the
/// model seed and the token content. Uniform when no token is in vocabulary.
std::vector<double> infer_topics(const TopicModel& model, const Document& doc);

/// Document-completion perplexity: the mixture is inferred from the
/// even-position tokens and the odd-position tokens are scored.
/// Out-of-vocabulary tokens are dropped. Throws ComputeError when nothing
/// is left to score.
double perplexity(const TopicModel& model, const std::vector<Document>& held_out);

struct KSelection {
  std::size_t best_k = 0;
  std::vector<std::pair<std::size_t, double>> perplexities;  // candidate order
};

/// Fits every candidate on a random (1 - holdout_fraction) split of the
/// documents and returns the argmin of held-out perplexity (smallest k on
/// ties).
KSelection select_k(const std::vector<Document>& docs, const std::vector<std::size_t>& candidates,
                    const LdaParams& base, double holdout_fraction = 0.2);

/// Terms ranked by phi (ties lexicographic), clamped to the vocabulary.
std::vector<std::pair<std::string, double>> top_words(const TopicModel& model, std::size_t topic,
                                                      std::size_t n = 15);

/// Greedy best-cosine matching of the topics of `b` onto those of `a`
/// over their shared vocabulary; result[i] is the topic of b paired with
/// topic i of a.
std::vector<std::size_t> align_topics(const TopicModel& a, const TopicModel& b);

}  // namespace gentricast

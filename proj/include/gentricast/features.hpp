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

// Neighborhood feature vectors and design matrices.
//
// Column order (version "gentricast-features v1"):
//   structured:   n_listings n_reviews mean_price mean_bedrooms mean_star
//                 mean_location_star [sub_<name> ... when enabled]
//   unstructured: mean_review_length location_word_pct mean_sentiment
//                 location_review_sentiment topic_0..topic_{K-1}
//                 emb_0..emb_{D-1}

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gentricast/corpus.hpp"
#include "gentricast/embeddings.hpp"
#include "gentricast/sentiment.hpp"
#include "gentricast/textprep.hpp"
#include "gentricast/topics.hpp"

namespace gentricast {

inline constexpr std::string_view kFeatureSchemaVersion = "gentricast-features v1";

struct FeatureVector {
  std::string neighborhood_id;
  std::size_t n_listings = 0;
  std::size_t n_reviews = 0;
  std::optional<double> mean_price;
  std::optional<double> mean_bedrooms;
  std::optional<double> mean_star;
  std::optional<double> mean_location_star;
  std::map<std::string, std::optional<double>> subratings;
  std::optional<double> mean_review_length;
  std::optional<double> location_word_pct;
  std::optional<double> mean_sentiment;
  std::optional<double> location_review_sentiment;
  std::vector<double> topic_means;      // empty when n_reviews == 0
  std::vector<double> embedding_means;  // empty when n_reviews == 0
};

/// Per-review quantities, computed once per review.
struct ReviewFeatures {
  std::string review_id;
  std::string listing_id;
  std::size_t length = 0;
  double location_pct = 0.0;
  bool location_review = false;
  double sentiment = 0.0;
  std::vector<double> theta;
  std::vector<float> vector;
};

struct TextResources {
  const LocationDictionary* dictionary = nullptr;
  const SentimentLexicon* lexicon = nullptr;
  SentimentRules rules;
  const TopicModel* topics = nullptr;
  const EmbeddingModel* embeddings = nullptr;
};

/// Reviews sorted by review_id (then listing_id, date, text) so that every
/// downstream result is independent of input order.
std::vector<Review> canonical_order(std::vector<Review> reviews);

/// Token lists for model fitting, in the order given.
std::vector<Document> tokenize_all(const std::vector<Review>& reviews);

/// Pure per review; `threads` > 1 splits the work, results are placed by
/// index so the output does not depend on scheduling.
std::vector<ReviewFeatures> review_features(const std::vector<Review>& reviews,
                                            const TextResources& res, std::size_t threads = 1);

/// Per-listing means over the neighborhood's listings; missing star fields
/// are skipped. n_reviews is left at zero.
FeatureVector structured_features(const std::vector<Listing>& listings,
                                  const std::string& neighborhood_id);

/// Per-review means; location_review_sentiment only over location reviews.
void unstructured_features(FeatureVector& fv, const std::vector<const ReviewFeatures*>& reviews);

/// One vector per neighborhood in `neighborhoods` (sorted by id).
std::vector<FeatureVector> build_features(const std::vector<Listing>& listings,
                                          const std::vector<ReviewFeatures>& reviews,
                                          const std::set<std::string>& neighborhoods);

enum class FeatureSet { structured, unstructured, all };

std::string_view to_string(FeatureSet s) noexcept;
/// Throws ConfigError.
FeatureSet parse_feature_set(std::string_view s);

struct ImputationEntry {
  std::string column;
  std::size_t missing = 0;
  double fill_value = 0.0;
};

struct DesignMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> columns;
  std::size_t n_structured = 0;  // leading structured columns
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<bool>> imputed;
  std::vector<double> target;
  std::vector<ImputationEntry> imputation;        // columns with at least one fill
  std::vector<std::string> excluded_no_features;  // had a target, no feature vector
  std::vector<std::string> excluded_no_target;

  std::size_t n() const noexcept { return rows.size(); }
  std::size_t p() const noexcept { return columns.size(); }
  /// Column indices belonging to `set`.
  std::vector<std::size_t> select(FeatureSet set) const;
  DesignMatrix subset(FeatureSet set) const;
  std::vector<double> column(std::size_t j) const;
};

struct AssembleOptions {
  bool include_subratings = false;
};

/// Rows are the neighborhoods with both a feature vector and a target,
/// ordered by id. Missing cells get the median of the observed values of
/// their column (0 when a column has none) and are flagged.
DesignMatrix assemble_matrix(const std::vector<FeatureVector>& vectors,
                             const std::map<std::string, double>& targets,
                             const AssembleOptions& options = {});

/// Number of structured columns under `options`.
std::size_t structured_column_count(const AssembleOptions& options);

/// Header plus one row per neighborhood: id, target, columns, then one
/// imputed_<column> 0/1 flag per column that had fills.
void write_matrix_csv(const DesignMatrix& m, std::ostream& out);

struct FeatureSummary {
  std::string column;
  double median = 0.0;
  double sd = 0.0;
};

std::vector<FeatureSummary> summarize_features(const DesignMatrix& m);

}  // namespace gentricast

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

// Review text normalization.
//
// Pipeline: ASCII lowercase, drop apostrophes, every other non-alphanumeric
// ASCII byte becomes a separator, remove stopwords, Porter-stem each term
// until it stops changing, then remove stopwords again. Bytes >= 0x80 are
// kept as word characters and such words are never stemmed.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace gentricast {

struct TokenizedReview {
  std::size_t raw_word_count = 0;
  std::vector<std::string> tokens;
};

/// Version tag of the built-in stopword list.
inline constexpr std::string_view kStopwordListVersion = "gentricast-en-stopwords-v1";

const std::unordered_set<std::string>& stopwords();

/// Stem repeatedly until a fixed point.
std::string stem(std::string_view word);

TokenizedReview preprocess(std::string_view text);

/// Number of whitespace-separated tokens in the raw text.
std::size_t review_length(std::string_view text) noexcept;

class LocationDictionary {
 public:
  LocationDictionary() = default;
  /// Terms are stemmed on insertion; terms that stem to nothing are skipped.
  explicit LocationDictionary(const std::vector<std::string>& terms);

  /// One term per line, '#' comments, blank lines ignored.
  static LocationDictionary parse(std::string_view text);
  static LocationDictionary load(const std::filesystem::path& path);
  /// The dictionary shipped with the library.
  static const LocationDictionary& builtin();

  bool contains(const std::string& stemmed) const { return terms_.count(stemmed) > 0; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::unordered_set<std::string>& terms() const noexcept { return terms_; }

 private:
  std::unordered_set<std::string> terms_;
};

inline constexpr double kLocationReviewThreshold = 10.0;

/// 100 * dictionary hits / token count; 0 for an empty review. Throws
/// ConfigError for an empty dictionary.
double location_word_fraction(const TokenizedReview& tok, const LocationDictionary& dict);

/// fraction >= 10 (inclusive).
bool is_location_review(const TokenizedReview& tok, const LocationDictionary& dict);

/// Most frequent dictionary terms over the reviews, ties broken
/// lexicographically.
std::vector<std::pair<std::string, std::size_t>> top_location_words(
    const std::vector<TokenizedReview>& reviews, const LocationDictionary& dict,
    std::size_t n = 10);

}  // namespace gentricast

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

// Lexicon and rule based sentiment (VADER semantics, release 3.3.2).
//
// Scores raw review text on (-1, 1). Case folding and the ALL-CAPS test
// use ASCII rules only; non-ASCII letters are compared verbatim.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gentricast/textprep.hpp"

namespace gentricast {

struct SentimentRules {
  double booster_increment = 0.293;
  double caps_increment = 0.733;
  double negation_scalar = -0.74;
  double alpha = 15.0;
  double exclamation_weight = 0.292;
  int exclamation_cap = 4;
  double question_weight = 0.18;
  double question_cap_value = 0.96;
  double but_before = 0.5;
  double but_after = 1.5;

  /// Throws ConfigError for alpha <= 0 or non-finite parameters.
  void validate() const;
};

class SentimentLexicon {
 public:
  /// Tab separated: term, valence, [ignored columns].
  static SentimentLexicon parse(std::string_view lexicon_text, std::string_view emoji_text = {});
  static SentimentLexicon load(const std::filesystem::path& lexicon,
                               const std::filesystem::path& emoji = {});
  static const SentimentLexicon& builtin();

  const double* valence(const std::string& term) const;
  const std::string* emoji(const std::string& code_point) const;
  std::size_t size() const noexcept { return valences_.size(); }

 private:
  std::unordered_map<std::string, double> valences_;
  std::unordered_map<std::string, std::string> emojis_;
};

/// Compound score. Empty or lexicon-free text scores exactly 0.
double score_sentiment(std::string_view text, const SentimentLexicon& lexicon,
                       const SentimentRules& rules = {});

struct ReviewText {
  std::string_view raw;
  const TokenizedReview* tokens = nullptr;
};

/// Mean sentiment over the reviews classified as location reviews;
/// nullopt when there are none.
std::optional<double> location_review_sentiment(const std::vector<ReviewText>& reviews,
                                                const LocationDictionary& dict,
                                                const SentimentLexicon& lexicon,
                                                const SentimentRules& rules = {});

}  // namespace gentricast

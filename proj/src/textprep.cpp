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

#include "gentricast/textprep.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "gentricast/embedded_data.hpp"
#include "gentricast/error.hpp"
#include "gentricast/porter_stemmer.hpp"

namespace gentricast {

const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> words{
      "a", "about", "above", "after", "again", "against", "ain", "all", "am", "an", "and", "any",
      "are", "aren", "arent", "as", "at", "be", "because", "been", "before", "being", "below",
      "between", "both", "but", "by", "can", "couldn", "couldnt", "d", "did", "didn", "didnt",
      "do", "does", "doesn", "doesnt", "doing", "don", "dont", "down", "during", "each", "few",
      "for", "from", "further", "had", "hadn", "hadnt", "has", "hasn", "hasnt", "have", "haven",
      "havent", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
      "i", "if", "in", "into", "is", "isn", "isnt", "it", "its", "itself", "just", "ll", "m", "ma",
      "me", "mightn", "mightnt", "more", "most", "mustn", "mustnt", "my", "myself", "needn",
      "neednt", "no", "nor", "not", "now", "o", "of", "off", "on", "once", "only", "or", "other",
      "our", "ours", "ourselves", "out", "over", "own", "re", "s", "same", "shan", "shant", "she",
      "shes", "should", "shouldve", "shouldn", "shouldnt", "so", "some", "such", "t", "than",
      "that", "thatll", "the", "their", "theirs", "them", "themselves", "then", "there", "these",
      "they", "this", "those", "through", "to", "too", "under", "until", "up", "ve", "very", "was",
      "wasn", "wasnt", "we", "were", "weren", "werent", "what", "when", "where", "which", "while",
      "who", "whom", "why", "will", "with", "won", "wont", "wouldn", "wouldnt", "y", "you",
      "youd", "youll", "youre", "youve", "your", "yours", "yourself", "yourselves"};
  return words;
}

std::string stem(std::string_view word) {
  std::string cur(word);
  while (true) {
    std::string next = porter_stem(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

namespace {

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  };
  for (unsigned char c : text) {
    if (c == '\'') continue;
    if (c >= 'A' && c <= 'Z') {
      cur.push_back(static_cast<char>(c + 32));
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80) {
      cur.push_back(static_cast<char>(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace

TokenizedReview preprocess(std::string_view text) {
  TokenizedReview out;
  out.raw_word_count = review_length(text);
  const auto& stop = stopwords();
  for (auto& w : split_words(text)) {
    if (stop.count(w)) continue;
    std::string s = stem(w);
    if (s.empty() || stop.count(s)) continue;
    out.tokens.push_back(std::move(s));
  }
  return out;
}

std::size_t review_length(std::string_view text) noexcept {
  std::size_t n = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

LocationDictionary::LocationDictionary(const std::vector<std::string>& terms) {
  for (const auto& t : terms) {
    for (auto& tok : preprocess(t).tokens) terms_.insert(std::move(tok));
  }
}

LocationDictionary LocationDictionary::parse(std::string_view text) {
  std::vector<std::string> terms;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    terms.push_back(line.substr(first, last - first + 1));
  }
  return LocationDictionary(terms);
}

LocationDictionary LocationDictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open location dictionary '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  auto dict = parse(ss.str());
  if (dict.empty()) throw ConfigError("location dictionary '" + path.string() + "' is empty");
  return dict;
}

const LocationDictionary& LocationDictionary::builtin() {
  static const LocationDictionary dict = parse(embedded::location_words());
  return dict;
}

double location_word_fraction(const TokenizedReview& tok, const LocationDictionary& dict) {
  if (dict.empty()) throw ConfigError("location dictionary is empty");
  if (tok.tokens.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& t : tok.tokens) hits += dict.contains(t) ? 1 : 0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(tok.tokens.size());
}

bool is_location_review(const TokenizedReview& tok, const LocationDictionary& dict) {
  return location_word_fraction(tok, dict) >= kLocationReviewThreshold;
}

std::vector<std::pair<std::string, std::size_t>> top_location_words(
    const std::vector<TokenizedReview>& reviews, const LocationDictionary& dict, std::size_t n) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : reviews) {
    for (const auto& t : r.tokens) {
      if (dict.contains(t)) ++counts[t];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (out.size() > n) out.resize(n);
  return out;
}

}  // namespace gentricast

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

#include <array>
#include <string>
#include <unordered_set>

#include "gentricast/corpus.hpp"

namespace gentricast {

namespace {

struct Profile {
  const char* code;
  std::unordered_set<std::string> words;
};

// High-frequency function words per language. Kept short on purpose: the
// detector only needs discriminative coverage, not a full stopword list.
const std::array<Profile, 7>& profiles() {
  static const std::array<Profile, 7> p{{
      {"en",
       {"the", "and", "a", "an", "of", "to", "in", "is", "was", "it", "for", "on", "with", "we",
        "i", "you", "this", "that", "very", "our", "my", "at", "are", "were", "be", "had", "have",
        "from", "but", "not", "they", "there", "all", "as", "so", "would", "again", "near", "he",
        "she", "her", "his", "place", "great", "stay"}},
      {"fr",
       {"le", "la", "les", "de", "des", "du", "un", "une", "et", "est", "était", "à", "au", "aux",
        "en", "pour", "dans", "sur", "avec", "nous", "vous", "très", "pas", "ne", "ce", "cette",
        "il", "elle", "qui", "que", "près", "bien", "tout", "appartement", "séjour"}},
      {"es",
       {"el", "la", "los", "las", "de", "del", "un", "una", "y", "es", "fue", "en", "para", "por",
        "con", "muy", "que", "no", "nos", "lo", "al", "su", "estaba", "todo", "cerca", "bien",
        "apartamento", "lugar"}},
      {"de",
       {"der", "die", "das", "und", "ist", "war", "ein", "eine", "zu", "in", "mit", "für", "auf",
        "sehr", "wir", "nicht", "es", "den", "dem", "von", "sich", "auch", "wohnung", "alles",
        "gut", "nähe"}},
      {"it",
       {"il", "lo", "la", "gli", "le", "di", "del", "della", "un", "una", "e", "è", "era", "per",
        "con", "molto", "che", "non", "ci", "abbiamo", "siamo", "tutto", "vicino", "casa"}},
      {"pt",
       {"o", "a", "os", "as", "de", "do", "da", "um", "uma", "e", "é", "foi", "em", "para", "com",
        "muito", "que", "não", "nos", "no", "na", "tudo", "perto", "apartamento", "lugar"}},
      {"nl",
       {"de", "het", "een", "en", "is", "was", "van", "in", "op", "met", "voor", "zeer", "heel",
        "wij", "we", "niet", "er", "ook", "dat", "die", "appartement", "alles", "goed"}},
  }};
  return p;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    const bool letter = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
    if (letter) {
      cur.push_back(static_cast<char>((c >= 'A' && c <= 'Z') ? c + 32 : c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string primary_subtag(std::string_view tag) {
  std::string out;
  for (char c : tag) {
    if (c == '-' || c == '_') break;
    out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c);
  }
  return out;
}

}  // namespace

std::optional<std::string> detect_language(std::string_view text) {
  const auto tokens = word_tokens(text);
  if (tokens.empty()) return std::nullopt;
  double best = 0.0;
  const char* best_code = nullptr;
  bool tied = false;
  for (const auto& profile : profiles()) {
    std::size_t hits = 0;
    for (const auto& t : tokens) hits += profile.words.count(t);
    const double frac = static_cast<double>(hits) / static_cast<double>(tokens.size());
    if (frac > best) {
      best = frac;
      best_code = profile.code;
      tied = false;
    } else if (frac == best && frac > 0.0) {
      tied = true;
    }
  }
  if (best_code == nullptr || tied) return std::nullopt;
  return std::string(best_code);
}

LanguageFilterResult filter_language(const std::vector<Review>& reviews,
                                     std::string_view language) {
  const std::string wanted = primary_subtag(language);
  LanguageFilterResult out;
  for (const auto& r : reviews) {
    if (r.language && !r.language->empty()) {
      if (primary_subtag(*r.language) == wanted) {
        out.retained.push_back(r);
      } else {
        ++out.excluded_other_language;
      }
      continue;
    }
    auto detected = detect_language(r.text);
    if (!detected) {
      ++out.excluded_undetectable;
    } else if (*detected == wanted) {
      out.retained.push_back(r);
    } else {
      ++out.excluded_other_language;
    }
  }
  return out;
}

}  // namespace gentricast

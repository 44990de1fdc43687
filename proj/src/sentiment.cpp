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

#include "gentricast/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "gentricast/embedded_data.hpp"
#include "gentricast/error.hpp"

namespace gentricast {

namespace {

const std::unordered_set<std::string>& negate_words() {
  static const std::unordered_set<std::string> w{
      "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt", "ain't",
      "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't", "dont", "hadnt", "hasnt",
      "havent", "isnt", "mightnt", "mustnt", "neither", "don't", "hadn't", "hasn't", "haven't",
      "isn't", "mightn't", "mustn't", "neednt", "needn't", "never", "none", "nope", "nor", "not",
      "nothing", "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent", "oughtn't",
      "shan't", "shouldn't", "uh-uh", "wasn't", "weren't", "without", "wont", "wouldnt", "won't",
      "wouldn't", "rarely", "seldom", "despite"};
  return w;
}

// +1 for increment, -1 for decrement
const std::unordered_map<std::string, int>& boosters() {
  static const std::unordered_map<std::string, int> b{
      {"absolutely", 1}, {"amazingly", 1}, {"awfully", 1}, {"completely", 1},
      {"considerable", 1}, {"considerably", 1}, {"decidedly", 1}, {"deeply", 1},
      {"effing", 1}, {"enormous", 1}, {"enormously", 1}, {"entirely", 1},
      {"especially", 1}, {"exceptional", 1}, {"exceptionally", 1}, {"extreme", 1},
      {"extremely", 1}, {"fabulously", 1}, {"flipping", 1}, {"flippin", 1},
      {"frackin", 1}, {"fracking", 1}, {"fricking", 1}, {"frickin", 1},
      {"frigging", 1}, {"friggin", 1}, {"fully", 1}, {"fuckin", 1},
      {"fucking", 1}, {"fuggin", 1}, {"fugging", 1}, {"greatly", 1},
      {"hella", 1}, {"highly", 1}, {"hugely", 1}, {"incredible", 1},
      {"incredibly", 1}, {"intensely", 1}, {"major", 1}, {"majorly", 1},
      {"more", 1}, {"most", 1}, {"particularly", 1}, {"purely", 1},
      {"quite", 1}, {"really", 1}, {"remarkably", 1}, {"so", 1},
      {"substantially", 1}, {"thoroughly", 1}, {"total", 1}, {"totally", 1},
      {"tremendous", 1}, {"tremendously", 1}, {"uber", 1}, {"unbelievably", 1},
      {"unusually", 1}, {"utter", 1}, {"utterly", 1}, {"very", 1},
      {"almost", -1}, {"barely", -1}, {"hardly", -1}, {"just enough", -1},
      {"kind of", -1}, {"kinda", -1}, {"kindof", -1}, {"kind-of", -1},
      {"less", -1}, {"little", -1}, {"marginal", -1}, {"marginally", -1},
      {"occasional", -1}, {"occasionally", -1}, {"partly", -1}, {"scarce", -1},
      {"scarcely", -1}, {"slight", -1}, {"slightly", -1}, {"somewhat", -1},
      {"sort of", -1}, {"sorta", -1}, {"sortof", -1}, {"sort-of", -1}};
  return b;
}

const std::unordered_map<std::string, double>& special_cases() {
  static const std::unordered_map<std::string, double> s{
      {"the shit", 3.0},     {"the bomb", 3.0},      {"bad ass", 1.5},
      {"badass", 1.5},       {"bus stop", 0.0},      {"yeah right", -2.0},
      {"kiss of death", -1.5}, {"to die for", 3.0},  {"beating heart", 3.5}};
  return s;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  return out;
}

// at least one cased letter and no lowercase ones
bool ascii_isupper(std::string_view s) {
  bool cased = false;
  for (char c : s) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') cased = true;
  }
  return cased;
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

std::vector<std::string_view> code_points(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t len = std::min(utf8_length(static_cast<unsigned char>(s[i])), s.size() - i);
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

bool is_space(unsigned char c) {
  return c == ' ' || (c >= 0x09 && c <= 0x0D) || (c >= 0x1C && c <= 0x1F);
}

bool is_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}

std::string_view strip_ws(std::string_view s) {
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> words_and_emoticons(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::string_view tok = text.substr(i, j - i);
      std::string_view stripped = tok;
      while (!stripped.empty() && is_punct(stripped.front())) stripped.remove_prefix(1);
      while (!stripped.empty() && is_punct(stripped.back())) stripped.remove_suffix(1);
      out.emplace_back(code_points(stripped).size() <= 2 ? tok : stripped);
    }
    i = j;
  }
  return out;
}

bool negated(const std::string& lower_word) {
  return negate_words().count(lower_word) > 0 || lower_word.find("n't") != std::string::npos;
}

class Scorer {
 public:
  Scorer(const SentimentLexicon& lex, const SentimentRules& rules, std::vector<std::string> words)
      : lex_(lex), rules_(rules), words_(std::move(words)) {
    lower_.reserve(words_.size());
    std::size_t caps = 0;
    for (const auto& w : words_) {
      lower_.push_back(ascii_lower(w));
      if (ascii_isupper(w)) ++caps;
    }
    const std::size_t diff = words_.size() - caps;
    cap_diff_ = diff > 0 && diff < words_.size();
  }

  std::vector<double> sentiments() {
    std::vector<double> s;
    s.reserve(words_.size());
    const auto& b = boosters();
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (b.count(lower_[i])) {
        s.push_back(0.0);
        continue;
      }
      if (i + 1 < words_.size() && lower_[i] == "kind" && lower_[i + 1] == "of") {
        s.push_back(0.0);
        continue;
      }
      s.push_back(valence_at(i));
    }
    but_check(s);
    return s;
  }

 private:
  bool in_lex(std::size_t i) const { return lex_.valence(lower_[i]) != nullptr; }

  double scalar_inc_dec(std::size_t j, double valence) const {
    const auto& b = boosters();
    auto it = b.find(lower_[j]);
    if (it == b.end()) return 0.0;
    double scalar = it->second * rules_.booster_increment;
    if (valence < 0) scalar *= -1;
    if (ascii_isupper(words_[j]) && cap_diff_) {
      scalar += valence > 0 ? rules_.caps_increment : -rules_.caps_increment;
    }
    return scalar;
  }

  double valence_at(std::size_t i) const {
    const double* base = lex_.valence(lower_[i]);
    if (!base) return 0.0;
    double valence = *base;
    const double ns = rules_.negation_scalar;
    if (lower_[i] == "no" && i + 1 < words_.size() && in_lex(i + 1)) valence = 0.0;
    if ((i > 0 && lower_[i - 1] == "no") || (i > 1 && lower_[i - 2] == "no") ||
        (i > 2 && lower_[i - 3] == "no" && (lower_[i - 1] == "or" || lower_[i - 1] == "nor"))) {
      valence = *base * ns;
    }
    if (ascii_isupper(words_[i]) && cap_diff_) {
      valence += valence > 0 ? rules_.caps_increment : -rules_.caps_increment;
    }
    for (std::size_t start = 0; start < 3; ++start) {
      if (i > start && !in_lex(i - (start + 1))) {
        double s = scalar_inc_dec(i - (start + 1), valence);
        if (start == 1 && s != 0) s *= 0.95;
        if (start == 2 && s != 0) s *= 0.9;
        valence += s;
        valence = negation_check(valence, start, i);
        if (start == 2) valence = special_idioms(valence, i);
      }
    }
    return least_check(valence, i);
  }

  double negation_check(double valence, std::size_t start, std::size_t i) const {
    const double ns = rules_.negation_scalar;
    if (start == 0) {
      if (negated(lower_[i - 1])) valence *= ns;
    } else if (start == 1) {
      if (lower_[i - 2] == "never" && (lower_[i - 1] == "so" || lower_[i - 1] == "this")) {
        valence *= 1.25;
      } else if (lower_[i - 2] == "without" && lower_[i - 1] == "doubt") {
      } else if (negated(lower_[i - 2])) {
        valence *= ns;
      }
    } else {
      if ((lower_[i - 3] == "never" && (lower_[i - 2] == "so" || lower_[i - 2] == "this")) ||
          (lower_[i - 1] == "so" || lower_[i - 1] == "this")) {
        valence *= 1.25;
      } else if (lower_[i - 3] == "without" &&
                 (lower_[i - 2] == "doubt" || lower_[i - 1] == "doubt")) {
      } else if (negated(lower_[i - 3])) {
        valence *= ns;
      }
    }
    return valence;
  }

  double special_idioms(double valence, std::size_t i) const {
    const auto& sc = special_cases();
    const std::string onezero = lower_[i - 1] + " " + lower_[i];
    const std::string twoonezero = lower_[i - 2] + " " + lower_[i - 1] + " " + lower_[i];
    const std::string twoone = lower_[i - 2] + " " + lower_[i - 1];
    const std::string threetwoone = lower_[i - 3] + " " + lower_[i - 2] + " " + lower_[i - 1];
    const std::string threetwo = lower_[i - 3] + " " + lower_[i - 2];
    for (const auto* seq : {&onezero, &twoonezero, &twoone, &threetwoone, &threetwo}) {
      if (auto it = sc.find(*seq); it != sc.end()) {
        valence = it->second;
        break;
      }
    }
    if (words_.size() - 1 > i) {
      if (auto it = sc.find(lower_[i] + " " + lower_[i + 1]); it != sc.end()) valence = it->second;
    }
    if (words_.size() - 1 > i + 1) {
      if (auto it = sc.find(lower_[i] + " " + lower_[i + 1] + " " + lower_[i + 2]);
          it != sc.end()) {
        valence = it->second;
      }
    }
    const auto& b = boosters();
    for (const auto* gram : {&threetwoone, &threetwo, &twoone}) {
      if (auto it = b.find(*gram); it != b.end()) valence += it->second * rules_.booster_increment;
    }
    return valence;
  }

  double least_check(double valence, std::size_t i) const {
    if (i > 1 && !in_lex(i - 1) && lower_[i - 1] == "least") {
      if (lower_[i - 2] != "at" && lower_[i - 2] != "very") valence *= rules_.negation_scalar;
    } else if (i > 0 && !in_lex(i - 1) && lower_[i - 1] == "least") {
      valence *= rules_.negation_scalar;
    }
    return valence;
  }

  // Mirrors the reference: each value is written back at the first index
  // holding an equal value, not necessarily its own position.
  void but_check(std::vector<double>& s) const {
    auto bit = std::find(lower_.begin(), lower_.end(), "but");
    if (bit == lower_.end()) return;
    const auto bi = static_cast<std::size_t>(bit - lower_.begin());
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double v = s[k];
      const auto si = static_cast<std::size_t>(std::find(s.begin(), s.end(), v) - s.begin());
      if (si < bi) {
        s[si] = v * rules_.but_before;
      } else if (si > bi) {
        s[si] = v * rules_.but_after;
      }
    }
  }

  const SentimentLexicon& lex_;
  const SentimentRules& rules_;
  std::vector<std::string> words_;
  std::vector<std::string> lower_;
  bool cap_diff_ = false;
};

std::string replace_emojis(std::string_view text, const SentimentLexicon& lex) {
  std::string out;
  out.reserve(text.size());
  bool prev_space = true;
  for (auto cp : code_points(text)) {
    if (const std::string* desc = lex.emoji(std::string(cp))) {
      if (!prev_space) out.push_back(' ');
      out += *desc;
      prev_space = false;
    } else {
      out += cp;
      prev_space = cp == " ";
    }
  }
  return out;
}

}  // namespace

void SentimentRules::validate() const {
  for (double v : {booster_increment, caps_increment, negation_scalar, alpha, exclamation_weight,
                   question_weight, question_cap_value, but_before, but_after}) {
    if (!std::isfinite(v)) throw ConfigError("sentiment rule parameters must be finite");
  }
  if (alpha <= 0.0) throw ConfigError("sentiment alpha must be positive");
  if (exclamation_cap < 0) throw ConfigError("sentiment exclamation cap must be >= 0");
}

SentimentLexicon SentimentLexicon::parse(std::string_view lexicon_text,
                                         std::string_view emoji_text) {
  SentimentLexicon lex;
  auto for_lines = [](std::string_view text, auto&& fn) {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = strip_ws(text.substr(pos, nl - pos));
      pos = nl + 1;
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string_view::npos) continue;
      std::string_view rest = line.substr(tab + 1);
      fn(std::string(line.substr(0, tab)), std::string(rest.substr(0, rest.find('\t'))));
    }
  };
  for_lines(lexicon_text, [&](std::string term, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || !std::isfinite(v)) {
      throw ConfigError("sentiment lexicon: bad valence for '" + term + "'");
    }
    lex.valences_[std::move(term)] = v;
  });
  for_lines(emoji_text, [&](std::string glyph, std::string desc) {
    if (code_points(glyph).size() == 1) lex.emojis_[std::move(glyph)] = std::move(desc);
  });
  return lex;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& lexicon,
                                        const std::filesystem::path& emoji) {
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot open lexicon '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string lex_text = slurp(lexicon);
  const std::string emoji_text =
      emoji.empty() ? std::string(embedded::emoji_lexicon()) : slurp(emoji);
  return parse(lex_text, emoji_text);
}

const SentimentLexicon& SentimentLexicon::builtin() {
  static const SentimentLexicon lex = parse(embedded::vader_lexicon(), embedded::emoji_lexicon());
  return lex;
}

const double* SentimentLexicon::valence(const std::string& term) const {
  auto it = valences_.find(term);
  return it == valences_.end() ? nullptr : &it->second;
}

const std::string* SentimentLexicon::emoji(const std::string& code_point) const {
  auto it = emojis_.find(code_point);
  return it == emojis_.end() ? nullptr : &it->second;
}

double score_sentiment(std::string_view raw, const SentimentLexicon& lexicon,
                       const SentimentRules& rules) {
  const std::string replaced = replace_emojis(raw, lexicon);
  const std::string_view text = strip_ws(replaced);
  Scorer scorer(lexicon, rules, words_and_emoticons(text));
  const auto s = scorer.sentiments();
  if (s.empty()) return 0.0;
  double sum = 0.0;
  for (double v : s) sum += v;

  const auto ep = std::min<std::ptrdiff_t>(std::count(text.begin(), text.end(), '!'),
                                           rules.exclamation_cap);
  const auto qm = std::count(text.begin(), text.end(), '?');
  double amp = static_cast<double>(ep) * rules.exclamation_weight;
  if (qm > 1) amp += qm <= 3 ? static_cast<double>(qm) * rules.question_weight
                             : rules.question_cap_value;
  if (sum > 0) {
    sum += amp;
  } else if (sum < 0) {
    sum -= amp;
  }
  const double norm = sum / std::sqrt(sum * sum + rules.alpha);
  return std::clamp(norm, -1.0, 1.0);
}

std::optional<double> location_review_sentiment(const std::vector<ReviewText>& reviews,
                                                const LocationDictionary& dict,
                                                const SentimentLexicon& lexicon,
                                                const SentimentRules& rules) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& r : reviews) {
    const TokenizedReview tok = r.tokens ? *r.tokens : preprocess(r.raw);
    if (!is_location_review(tok, dict)) continue;
    total += score_sentiment(r.raw, lexicon, rules);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return total / static_cast<double>(n);
}

}  // namespace gentricast

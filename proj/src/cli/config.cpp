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

#include "gentricast/cli/config.hpp"

#include <fstream>
#include <type_traits>
#include <sstream>

#include <fmt/format.h>

#include "gentricast/error.hpp"
#include "gentricast/rng.hpp"

namespace gentricast::cli {

using nlohmann::json;

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw ConfigError("a master seed is required (--seed or \"seed\" in the config)");
  return *seed;
}

std::uint64_t RunConfig::stage_seed(std::uint64_t stage) const {
  return derive_seed(require_seed(), stage);
}

json default_config() {
  const CorpusConfig corpus;
  const LdaParams lda;
  const EmbeddingParams emb;
  const SentimentRules rules;
  const ForestParams forest;
  const EvaluationProtocol eval;
  const SynthConfig synth;
  return json{
      {"seed", nullptr},
      {"city", "city"},
      {"country", "US"},
      {"out", "out"},
      {"threads", 1},
      {"paths",
       {{"listings", ""},
        {"reviews", ""},
        {"socio_tw_minus_1", ""},
        {"socio_tw", ""},
        {"dictionary", ""},
        {"lexicon", ""},
        {"emoji_lexicon", ""},
        {"topic_model", ""},
        {"embedding_model", ""}}},
      {"corpus",
       {{"window_start", format_date(corpus.window_start)},
        {"window_end", format_date(corpus.window_end)},
        {"min_listings", corpus.min_listings},
        {"language", corpus.language},
        {"currency_rate", corpus.currency_rate},
        {"delimiter", std::string(1, corpus.delimiter)}}},
      {"scoring", {{"target", "equal4"}, {"population", "disadvantaged"}}},
      {"features", {{"set", "all"}, {"include_subratings", false}}},
      {"topics",
       {{"k", lda.k},
        {"candidates", {2, 3, 4, 5, 6, 7, 8}},
        {"holdout_fraction", 0.2},
        {"alpha", nullptr},
        {"beta", lda.beta},
        {"iterations", lda.iterations},
        {"burn_in", lda.burn_in},
        {"min_count", lda.min_count},
        {"infer_iterations", lda.infer_iterations},
        {"infer_burn_in", lda.infer_burn_in},
        {"labels", json::array()}}},
      {"embeddings",
       {{"dim", emb.dim},
        {"epochs", emb.epochs},
        {"negative", emb.negative},
        {"lr_start", emb.lr_start},
        {"lr_end", emb.lr_end},
        {"min_count", emb.min_count},
        {"infer_epochs", emb.infer_epochs},
        {"parallel", emb.parallel},
        {"threads", emb.threads}}},
      {"sentiment",
       {{"booster_increment", rules.booster_increment},
        {"caps_increment", rules.caps_increment},
        {"negation_scalar", rules.negation_scalar},
        {"alpha", rules.alpha},
        {"exclamation_weight", rules.exclamation_weight},
        {"exclamation_cap", rules.exclamation_cap},
        {"question_weight", rules.question_weight},
        {"question_cap_value", rules.question_cap_value},
        {"but_before", rules.but_before},
        {"but_after", rules.but_after}}},
      {"forest",
       {{"n_trees", forest.n_trees},
        {"mtry", nullptr},
        {"min_samples_leaf", forest.min_samples_leaf},
        {"bootstrap", forest.bootstrap},
        {"max_depth", nullptr}}},
      {"evaluation", {{"n_sims", eval.n_sims}, {"train_fraction", eval.train_fraction}}},
      {"synth",
       {{"n_neighborhoods", synth.n_neighborhoods},
        {"country", "US"},
        {"latent_mean", synth.latent_mean},
        {"latent_sd", synth.latent_sd},
        {"advantaged_change_scale", synth.advantaged_change_scale},
        {"panel_noise", synth.panel_noise},
        {"listings_base", synth.listings_base},
        {"listings_slope", synth.listings_slope},
        {"listings_noise", synth.listings_noise},
        {"min_listings", synth.min_listings},
        {"reviews_mean", synth.reviews_mean},
        {"reviews_spread", synth.reviews_spread},
        {"location_rate_base", synth.location_rate_base},
        {"location_rate_slope", synth.location_rate_slope},
        {"positive_rate_base", synth.positive_rate_base},
        {"positive_rate_slope", synth.positive_rate_slope},
        {"price_base", synth.price_base},
        {"price_slope", synth.price_slope},
        {"price_noise", synth.price_noise},
        {"foreign_review_rate", synth.foreign_review_rate},
        {"out_of_window_rate", synth.out_of_window_rate},
        {"missing_star_rate", synth.missing_star_rate}}},
  };
}

namespace {

void check_keys(const json& doc, const json& reference, const std::string& prefix) {
  for (const auto& [key, value] : doc.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!reference.contains(key)) throw ConfigError(fmt::format("unknown config key '{}'", path));
    const json& ref = reference.at(key);
    if (ref.is_object()) {
      if (!value.is_object()) throw ConfigError(fmt::format("config key '{}' must be an object", path));
      check_keys(value, ref, path);
    }
  }
}

class Reader {
 public:
  explicit Reader(const json& doc) : doc_(doc) {}

  const json& at(const std::string& dotted) const {
    const json* node = &doc_;
    std::size_t start = 0;
    while (true) {
      const auto dot = dotted.find('.', start);
      const std::string key = dotted.substr(start, dot - start);
      node = &node->at(key);
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    return *node;
  }

  template <class T>
  T get(const std::string& key) const {
    const json& v = at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("");
      } else if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
          if (!v.is_number_unsigned()) throw ConfigError("");
        }
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError("");
      }
      return v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("config key '{}' has the wrong type ({})", key, v.dump()));
    }
  }

  template <class T>
  std::optional<T> get_optional(const std::string& key) const {
    if (at(key).is_null()) return std::nullopt;
    return get<T>(key);
  }

 private:
  const json& doc_;
};

Date date_value(const Reader& r, const std::string& key) {
  const auto s = r.get<std::string>(key);
  const auto d = parse_date(s);
  if (!d) throw ConfigError(fmt::format("config key '{}': invalid date '{}'", key, s));
  return *d;
}

Country country_value(const Reader& r, const std::string& key) {
  const auto s = r.get<std::string>(key);
  const auto c = parse_country(s);
  if (!c) throw ConfigError(fmt::format("config key '{}': unknown country '{}'", key, s));
  return *c;
}

}  // namespace

void apply_override(json& doc, const std::string& dotted_key, const std::string& value) {
  const json reference = default_config();
  const json* ref = &reference;
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted_key.find('.', start);
    const std::string key = dotted_key.substr(start, dot - start);
    if (!ref->is_object() || !ref->contains(key)) {
      throw ConfigError(fmt::format("unknown config key '{}'", dotted_key));
    }
    ref = &ref->at(key);
    if (dot == std::string::npos) {
      if (ref->is_object()) throw ConfigError(fmt::format("config key '{}' is a section", dotted_key));
      json parsed = json::parse(value, nullptr, false);
      (*node)[key] = parsed.is_discarded() ? json(value) : std::move(parsed);
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

RunConfig parse_config(const json& doc) {
  check_keys(doc, default_config(), "");
  json merged = default_config();
  merged.merge_patch(doc);
  // merge_patch drops keys set to null; restore them so the echo is complete.
  const json defaults = default_config();
  for (const auto& [section, body] : defaults.items()) {
    if (!merged.contains(section)) merged[section] = body;
    if (!body.is_object()) continue;
    for (const auto& [key, value] : body.items()) {
      if (!merged[section].contains(key)) merged[section][key] = value;
    }
  }
  const Reader r(merged);

  RunConfig c;
  c.seed = r.get_optional<std::uint64_t>("seed");
  c.city = r.get<std::string>("city");
  c.country = country_value(r, "country");
  c.out = r.get<std::string>("out");
  c.threads = r.get<std::size_t>("threads");
  if (c.threads == 0) throw ConfigError("threads must be >= 1");

  c.paths.listings = r.get<std::string>("paths.listings");
  c.paths.reviews = r.get<std::string>("paths.reviews");
  c.paths.socio_tw_minus_1 = r.get<std::string>("paths.socio_tw_minus_1");
  c.paths.socio_tw = r.get<std::string>("paths.socio_tw");
  c.paths.dictionary = r.get<std::string>("paths.dictionary");
  c.paths.lexicon = r.get<std::string>("paths.lexicon");
  c.paths.emoji_lexicon = r.get<std::string>("paths.emoji_lexicon");
  c.paths.topic_model = r.get<std::string>("paths.topic_model");
  c.paths.embedding_model = r.get<std::string>("paths.embedding_model");

  c.corpus.window_start = date_value(r, "corpus.window_start");
  c.corpus.window_end = date_value(r, "corpus.window_end");
  c.corpus.min_listings = r.get<std::size_t>("corpus.min_listings");
  c.corpus.language = r.get<std::string>("corpus.language");
  c.corpus.currency_rate = r.get<double>("corpus.currency_rate");
  const auto delim = r.get<std::string>("corpus.delimiter");
  if (delim.size() != 1) throw ConfigError("corpus.delimiter must be a single character");
  c.corpus.delimiter = delim[0];
  c.corpus.validate();

  c.target = TargetSpec::parse(r.get<std::string>("scoring.target"));
  const auto pop = r.get<std::string>("scoring.population");
  if (pop == "disadvantaged") {
    c.population = Population::disadvantaged;
  } else if (pop == "all") {
    c.population = Population::all;
  } else {
    throw ConfigError(fmt::format("scoring.population must be 'disadvantaged' or 'all', got '{}'", pop));
  }

  c.feature_set = parse_feature_set(r.get<std::string>("features.set"));
  c.include_subratings = r.get<bool>("features.include_subratings");

  const json& k = r.at("topics.k");
  if (k.is_string() && k.get<std::string>() == "auto") {
    c.select_topics = true;
  } else {
    c.lda.k = r.get<std::size_t>("topics.k");
  }
  c.topic_candidates = r.get<std::vector<std::size_t>>("topics.candidates");
  c.topic_holdout = r.get<double>("topics.holdout_fraction");
  if (c.select_topics && c.topic_candidates.size() < 2) {
    throw ConfigError("topics.candidates needs at least two values when topics.k is 'auto'");
  }
  if (!(c.topic_holdout > 0.0 && c.topic_holdout < 1.0)) {
    throw ConfigError("topics.holdout_fraction must lie in (0, 1)");
  }
  c.lda.alpha = r.get_optional<double>("topics.alpha");
  c.lda.beta = r.get<double>("topics.beta");
  c.lda.iterations = r.get<std::size_t>("topics.iterations");
  c.lda.burn_in = r.get<std::size_t>("topics.burn_in");
  c.lda.min_count = r.get<std::size_t>("topics.min_count");
  c.lda.infer_iterations = r.get<std::size_t>("topics.infer_iterations");
  c.lda.infer_burn_in = r.get<std::size_t>("topics.infer_burn_in");
  c.topic_labels = r.get<std::vector<std::string>>("topics.labels");
  if (!c.select_topics) c.lda.validate();

  c.embeddings.dim = r.get<std::size_t>("embeddings.dim");
  c.embeddings.epochs = r.get<std::size_t>("embeddings.epochs");
  c.embeddings.negative = r.get<std::size_t>("embeddings.negative");
  c.embeddings.lr_start = r.get<double>("embeddings.lr_start");
  c.embeddings.lr_end = r.get<double>("embeddings.lr_end");
  c.embeddings.min_count = r.get<std::size_t>("embeddings.min_count");
  c.embeddings.infer_epochs = r.get<std::size_t>("embeddings.infer_epochs");
  c.embeddings.parallel = r.get<bool>("embeddings.parallel");
  c.embeddings.threads = r.get<std::size_t>("embeddings.threads");
  c.embeddings.validate();

  c.sentiment.booster_increment = r.get<double>("sentiment.booster_increment");
  c.sentiment.caps_increment = r.get<double>("sentiment.caps_increment");
  c.sentiment.negation_scalar = r.get<double>("sentiment.negation_scalar");
  c.sentiment.alpha = r.get<double>("sentiment.alpha");
  c.sentiment.exclamation_weight = r.get<double>("sentiment.exclamation_weight");
  c.sentiment.exclamation_cap = r.get<int>("sentiment.exclamation_cap");
  c.sentiment.question_weight = r.get<double>("sentiment.question_weight");
  c.sentiment.question_cap_value = r.get<double>("sentiment.question_cap_value");
  c.sentiment.but_before = r.get<double>("sentiment.but_before");
  c.sentiment.but_after = r.get<double>("sentiment.but_after");
  c.sentiment.validate();

  auto& f = c.evaluation.forest;
  f.n_trees = r.get<std::size_t>("forest.n_trees");
  f.mtry = r.get_optional<std::size_t>("forest.mtry");
  f.min_samples_leaf = r.get<std::size_t>("forest.min_samples_leaf");
  f.bootstrap = r.get<bool>("forest.bootstrap");
  f.max_depth = r.get_optional<std::size_t>("forest.max_depth");
  c.evaluation.n_sims = r.get<std::size_t>("evaluation.n_sims");
  c.evaluation.train_fraction = r.get<double>("evaluation.train_fraction");
  c.evaluation.threads = c.threads;
  c.evaluation.validate();

  auto& s = c.synth;
  s.n_neighborhoods = r.get<std::size_t>("synth.n_neighborhoods");
  s.country = country_value(r, "synth.country");
  s.latent_mean = r.get<double>("synth.latent_mean");
  s.latent_sd = r.get<double>("synth.latent_sd");
  s.advantaged_change_scale = r.get<double>("synth.advantaged_change_scale");
  s.panel_noise = r.get<double>("synth.panel_noise");
  s.listings_base = r.get<double>("synth.listings_base");
  s.listings_slope = r.get<double>("synth.listings_slope");
  s.listings_noise = r.get<double>("synth.listings_noise");
  s.min_listings = r.get<std::size_t>("synth.min_listings");
  s.reviews_mean = r.get<double>("synth.reviews_mean");
  s.reviews_spread = r.get<double>("synth.reviews_spread");
  s.location_rate_base = r.get<double>("synth.location_rate_base");
  s.location_rate_slope = r.get<double>("synth.location_rate_slope");
  s.positive_rate_base = r.get<double>("synth.positive_rate_base");
  s.positive_rate_slope = r.get<double>("synth.positive_rate_slope");
  s.price_base = r.get<double>("synth.price_base");
  s.price_slope = r.get<double>("synth.price_slope");
  s.price_noise = r.get<double>("synth.price_noise");
  s.foreign_review_rate = r.get<double>("synth.foreign_review_rate");
  s.out_of_window_rate = r.get<double>("synth.out_of_window_rate");
  s.missing_star_rate = r.get<double>("synth.missing_star_rate");
  s.validate();

  if (c.seed) {
    c.lda.seed = c.stage_seed(1);
    c.embeddings.seed = c.stage_seed(2);
    c.evaluation.master_seed = c.stage_seed(3);
    c.synth.seed = *c.seed;
  }
  c.echo = std::move(merged);
  return c;
}

RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::vector<std::pair<std::string, std::string>>& overrides) {
  json doc = json::object();
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", file->string()));
    std::stringstream ss;
    ss << in.rdbuf();
    doc = json::parse(ss.str(), nullptr, false, true);
    if (doc.is_discarded() || !doc.is_object()) {
      throw ConfigError(fmt::format("config file '{}' is not a JSON object", file->string()));
    }
  }
  for (const auto& [key, value] : overrides) apply_override(doc, key, value);
  return parse_config(doc);
}

}  // namespace gentricast::cli

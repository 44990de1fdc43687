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

// Run configuration. A JSON document is layered as defaults, then the
// config file (merge patch), then dotted-key overrides; unknown keys are
// rejected. The merged document is echoed into every manifest.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gentricast/corpus.hpp"
#include "gentricast/embeddings.hpp"
#include "gentricast/evaluation.hpp"
#include "gentricast/features.hpp"
#include "gentricast/scoring.hpp"
#include "gentricast/sentiment.hpp"
#include "gentricast/synth.hpp"
#include "gentricast/topics.hpp"

namespace gentricast::cli {

struct Paths {
  std::filesystem::path listings;
  std::filesystem::path reviews;
  std::filesystem::path socio_tw_minus_1;
  std::filesystem::path socio_tw;
  std::filesystem::path dictionary;       // empty: shipped list
  std::filesystem::path lexicon;          // empty: shipped lexicon
  std::filesystem::path emoji_lexicon;    // empty: shipped emoji table
  std::filesystem::path topic_model;      // empty: fit
  std::filesystem::path embedding_model;  // empty: fit
};

enum class Population { disadvantaged, all };

struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::string city = "city";
  Country country = Country::us;
  std::filesystem::path out = "out";
  Paths paths;
  CorpusConfig corpus;
  TargetSpec target = TargetSpec::equal_four();
  Population population = Population::disadvantaged;
  FeatureSet feature_set = FeatureSet::all;
  bool include_subratings = false;
  std::size_t threads = 1;
  LdaParams lda;
  bool select_topics = false;
  std::vector<std::size_t> topic_candidates;
  double topic_holdout = 0.2;
  std::vector<std::string> topic_labels;
  EmbeddingParams embeddings;
  SentimentRules sentiment;
  EvaluationProtocol evaluation;
  SynthConfig synth;

  nlohmann::json echo;  // fully merged document

  /// Throws ConfigError when no seed was given.
  std::uint64_t require_seed() const;
  /// Per-stage seeds derived from the master seed.
  std::uint64_t stage_seed(std::uint64_t stage) const;
};

/// Every key with its default value.
nlohmann::json default_config();

/// "a.b.c" -> value; the value is parsed as JSON when possible, otherwise
/// taken as a string. Throws ConfigError for unknown keys.
void apply_override(nlohmann::json& doc, const std::string& dotted_key, const std::string& value);

/// Throws ConfigError for unreadable files, unknown keys, wrong types and
/// invalid parameter values.
RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::vector<std::pair<std::string, std::string>>& overrides);

RunConfig parse_config(const nlohmann::json& doc);

}  // namespace gentricast::cli

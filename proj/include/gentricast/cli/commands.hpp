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

// Subcommands. Each stage writes its artifacts under the output directory
// together with a manifest; later stages rerun the earlier ones in process.
//
//   ingest     ingest_report.json
//   score      + scores.csv, score_summary.csv, score_map.csv, score_histogram.{csv,svg}
//   featurize  + features.csv, data_dictionary.csv, feature_summary.csv,
//                imputation.csv, topic_top_words.csv, location_top_words.csv,
//                models/topics.txt, models/embeddings.txt
//   fit        + ols_coefficients.csv, forest_importance.csv, fit_summary.csv
//   evaluate   + correlations.csv, feature_crosscorr.csv, socio_crosscorr.csv,
//                rmse_in_sample.csv, rmse_out_of_sample.csv, rmse_by_sim.csv,
//                rmse.svg, mdi.csv, mdi_top5.csv, quartile_contrast.csv,
//                scatter_*.{csv,svg}, evaluation.json
//   report     + report.md
//   synth      listings.csv, reviews.csv, socio_tw_minus_1.csv, socio_tw.csv,
//              ground_truth.csv, config.json

#include <exception>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gentricast/cli/config.hpp"
#include "gentricast/corpus.hpp"
#include "gentricast/evaluation.hpp"
#include "gentricast/features.hpp"
#include "gentricast/scoring.hpp"

namespace gentricast::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kConfig = 2, kIngest = 3, kCompute = 4 };

/// Maps the error families onto exit codes.
int exit_code_for(const std::exception& e) noexcept;

struct Prepared {
  IngestReport listings_report;
  IngestReport reviews_report;
  IngestReport socio_prev_report;
  IngestReport socio_curr_report;
  std::size_t excluded_other_language = 0;
  std::size_t excluded_undetectable = 0;
  std::size_t reviews_outside_active = 0;
  ActiveNeighborhoods active;
  std::vector<Listing> listings;  // active neighborhoods only
  std::vector<Review> reviews;    // in window, target language, active, canonical order
  SocioPanel panel;
  std::optional<ScoreTable> table;         // set by score stage
  std::map<std::string, double> targets;  // scores of the configured population
};

struct Featurized {
  LocationDictionary dictionary;
  SentimentLexicon lexicon;
  TopicModel topics;
  std::optional<KSelection> selection;
  EmbeddingModel embeddings;
  std::vector<TokenizedReview> tokens;      // aligned with Prepared::reviews
  std::vector<ReviewFeatures> per_review;   // aligned with Prepared::reviews
  std::vector<FeatureVector> vectors;
  DesignMatrix matrix;                      // every column
};

/// Ingestion and filtering. Throws ConfigError for missing input paths.
Prepared prepare(const RunConfig& cfg);
/// Fills table and targets.
void score(const RunConfig& cfg, Prepared& p);
Featurized featurize(const RunConfig& cfg, const Prepared& p);

void cmd_ingest(const RunConfig& cfg);
void cmd_score(const RunConfig& cfg);
void cmd_featurize(const RunConfig& cfg);
void cmd_fit(const RunConfig& cfg);
void cmd_evaluate(const RunConfig& cfg);
void cmd_report(const RunConfig& cfg);
void cmd_synth(const RunConfig& cfg);

const std::vector<std::string>& command_names();

/// Runs a command by name, reporting errors on stderr. Returns the exit code.
int run_command(const std::string& name, const RunConfig& cfg);

}  // namespace gentricast::cli

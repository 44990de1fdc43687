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


#include "gentricast/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "gentricast/cli/manifest.hpp"
#include "gentricast/cli/svg.hpp"
#include "gentricast/csv.hpp"
#include "gentricast/error.hpp"
#include "gentricast/ols.hpp"
#include "gentricast/stats.hpp"
#include "gentricast/synth.hpp"

namespace gentricast::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e)) return kConfig;
  if (dynamic_cast<const IngestError*>(&e)) return kIngest;
  if (dynamic_cast<const ComputeError*>(&e)) return kCompute;
  return kInternal;
}

namespace {

void log(const std::string& msg) { fmt::print(stderr, "gentricast: {}\n", msg); }

std::string num(double v) {
  if (std::isnan(v)) return "";
  return fmt::format("{:.15g}", v);
}

std::string num_opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

/// Output directory plus the manifest that records what was written.
class Output {
 public:
  Output(const RunConfig& cfg, std::string command)
      : root_(cfg.out), manifest_(std::move(command), cfg.seed, cfg.echo, cfg.out) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw ConfigError(fmt::format("cannot create output directory '{}'", root_.string()));
  }

  std::ofstream open(const std::string& rel) {
    const auto path = root_ / rel;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
    pending_.push_back(rel);
    return out;
  }

  void text(const std::string& rel, const std::string& body) {
    auto out = open(rel);
    out << body;
  }

  void record(const std::string& rel) { pending_.push_back(rel); }

  void finish() {
    for (const auto& rel : pending_) manifest_.add(rel);
    manifest_.write();
  }

 private:
  fs::path root_;
  Manifest manifest_;
  std::vector<std::string> pending_;
};

void require_file(const fs::path& p, const std::string& key) {
  if (p.empty()) throw ConfigError(fmt::format("config key '{}' is required", key));
  if (!fs::is_regular_file(p)) {
    throw ConfigError(fmt::format("{}: file '{}' does not exist", key, p.string()));
  }
}

void optional_file(const fs::path& p, const std::string& key) {
  if (!p.empty()) require_file(p, key);
}

json report_json(const IngestReport& r) {
  json errors = json::array();
  for (std::size_t i = 0; i < r.errors.size() && i < 50; ++i) {
    errors.push_back({{"line", r.errors[i].line}, {"message", r.errors[i].message}});
  }
  return {{"source", r.source},
          {"rows", r.rows},
          {"parsed", r.parsed},
          {"error_count", r.errors.size()},
          {"errors", errors},
          {"filtered", r.filtered}};
}

// ---------------------------------------------------------------------------
// Stage writers

void write_ingest(Output& out, const Prepared& p) {
  json j;
  j["listings"] = report_json(p.listings_report);
  j["reviews"] = report_json(p.reviews_report);
  j["socio_tw_minus_1"] = report_json(p.socio_prev_report);
  j["socio_tw"] = report_json(p.socio_curr_report);
  j["language"] = {{"retained", p.reviews.size() + p.reviews_outside_active},
                   {"excluded_other_language", p.excluded_other_language},
                   {"excluded_undetectable", p.excluded_undetectable}};
  j["neighborhoods"] = {{"active", p.active.active.size()},
                        {"removed", p.active.removed},
                        {"reviews_without_listing", p.active.reviews_without_listing},
                        {"reviews_outside_active", p.reviews_outside_active}};
  j["panel"] = {{"usable", p.panel.usable.size()}, {"flagged", p.panel.flagged}};
  j["corpus"] = {{"listings", p.listings.size()}, {"reviews", p.reviews.size()}};
  out.text("ingest_report.json", j.dump(2) + "\n");
}

std::vector<Measure> measures_in(const ScoreTable& t) {
  std::vector<Measure> ms{Measure::age, Measure::education, Measure::housing, Measure::income};
  if (!t.rows.empty() && t.rows.front().pct_tw.race && t.rows.front().pct_prev.race) {
    ms.push_back(Measure::race);
  }
  return ms;
}

void write_scores(Output& out, const RunConfig& cfg, const Prepared& p) {
  const ScoreTable& t = *p.table;
  const auto ms = measures_in(t);
  {
    auto f = out.open("scores.csv");
    csv::Writer w(f);
    std::vector<std::string> header{"neighborhood_id"};
    for (auto m : ms) header.push_back(fmt::format("pct_tw_minus_1_{}", to_string(m)));
    for (auto m : ms) header.push_back(fmt::format("pct_tw_{}", to_string(m)));
    for (const char* h : {"index_tw_minus_1", "index_tw", "score", "disadvantaged", "in_population"}) {
      header.emplace_back(h);
    }
    w.row(header);
    for (const auto& r : t.rows) {
      std::vector<std::string> row{r.neighborhood_id};
      for (auto m : ms) row.push_back(num(r.pct_prev.get(m)));
      for (auto m : ms) row.push_back(num(r.pct_tw.get(m)));
      row.push_back(num(r.index_prev));
      row.push_back(num(r.index_tw));
      row.push_back(num(r.score));
      row.push_back(r.disadvantaged ? "1" : "0");
      row.push_back(p.targets.count(r.neighborhood_id) ? "1" : "0");
      w.row(row);
    }
  }
  {
    auto f = out.open("score_summary.csv");
    csv::Writer w(f);
    w.row({"measure", "period", "median", "sd"});
    for (const auto& s : summarize_scores(t)) w.row({s.measure, s.period, num(s.median), num(s.sd)});
  }
  {
    auto f = out.open("score_map.csv");
    csv::Writer w(f);
    w.row({"neighborhood_id", "score", "disadvantaged"});
    for (const auto& r : t.rows) {
      w.row({r.neighborhood_id, num(r.score), r.disadvantaged ? "1" : "0"});
    }
  }
  std::vector<double> values;
  for (const auto& [id, v] : p.targets) values.push_back(v);
  const auto bins = histogram_bins(values, 20);
  {
    auto f = out.open("score_histogram.csv");
    csv::Writer w(f);
    w.row({"bin_lo", "bin_hi", "count"});
    for (const auto& b : bins) w.row({num(b.lo), num(b.hi), std::to_string(b.count)});
  }
  out.text("score_histogram.svg",
           histogram_svg(bins, fmt::format("Distribution of the gentrification score ({})", cfg.city),
                         "gentrification score"));
}

std::string column_description(const std::string& c) {
  static const std::map<std::string, std::string> known{
      {"n_listings", "listings in the neighborhood"},
      {"n_reviews", "target-language reviews in the window"},
      {"mean_price", "mean nightly price"},
      {"mean_bedrooms", "mean bedrooms per listing"},
      {"mean_star", "mean overall star rating"},
      {"mean_location_star", "mean location rating"},
      {"mean_review_length", "mean review length in words"},
      {"location_word_pct", "mean percentage of location words per review"},
      {"mean_sentiment", "mean compound sentiment"},
      {"location_review_sentiment", "mean sentiment of location reviews"}};
  if (auto it = known.find(c); it != known.end()) return it->second;
  if (c.starts_with("sub_")) return "mean subrating " + c.substr(4);
  if (c.starts_with("topic_")) return "mean topic share of topic " + c.substr(6);
  if (c.starts_with("emb_")) return "mean document-vector component " + c.substr(4);
  return "";
}

void write_features(Output& out, const RunConfig& cfg, const Featurized& f) {
  {
    auto o = out.open("features.csv");
    write_matrix_csv(f.matrix, o);
  }
  {
    auto o = out.open("data_dictionary.csv");
    csv::Writer w(o);
    w.row({"column", "group", "description"});
    for (std::size_t j = 0; j < f.matrix.p(); ++j) {
      const auto& c = f.matrix.columns[j];
      w.row({c, j < f.matrix.n_structured ? "structured" : "unstructured", column_description(c)});
    }
  }
  {
    auto o = out.open("feature_summary.csv");
    csv::Writer w(o);
    w.row({"column", "median", "sd"});
    for (const auto& s : summarize_features(f.matrix)) w.row({s.column, num(s.median), num(s.sd)});
  }
  {
    auto o = out.open("imputation.csv");
    csv::Writer w(o);
    w.row({"column", "missing", "fill_value"});
    for (const auto& e : f.matrix.imputation) {
      w.row({e.column, std::to_string(e.missing), num(e.fill_value)});
    }
  }
  {
    auto o = out.open("topic_top_words.csv");
    csv::Writer w(o);
    w.row({"topic", "label", "rank", "term", "weight"});
    for (std::size_t k = 0; k < f.topics.k; ++k) {
      const std::string label = k < cfg.topic_labels.size() ? cfg.topic_labels[k] : "";
      std::size_t rank = 1;
      for (const auto& [term, weight] : top_words(f.topics, k, 15)) {
        w.row({std::to_string(k), label, std::to_string(rank++), term, num(weight)});
      }
    }
  }
  if (f.selection) {
    auto o = out.open("topic_selection.csv");
    csv::Writer w(o);
    w.row({"k", "perplexity", "selected"});
    for (const auto& [k, perp] : f.selection->perplexities) {
      w.row({std::to_string(k), num(perp), k == f.selection->best_k ? "1" : "0"});
    }
  }
  {
    auto o = out.open("location_top_words.csv");
    csv::Writer w(o);
    w.row({"rank", "term", "count"});
    std::size_t rank = 1;
    for (const auto& [term, count] : top_location_words(f.tokens, f.dictionary, 10)) {
      w.row({std::to_string(rank++), term, std::to_string(count)});
    }
  }
  {
    auto o = out.open("models/topics.txt");
    f.topics.save(o);
  }
  {
    auto o = out.open("models/embeddings.txt");
    f.embeddings.save(o);
  }
}

Matrix take_columns(const DesignMatrix& m, const std::vector<std::size_t>& cols) {
  Matrix x;
  x.reserve(m.n());
  for (const auto& row : m.rows) {
    std::vector<double> r;
    for (auto j : cols) r.push_back(row[j]);
    x.push_back(std::move(r));
  }
  return x;
}

void write_fit(Output& out, const RunConfig& cfg, const Featurized& f) {
  const auto cols = f.matrix.select(cfg.feature_set);
  if (cols.empty()) throw ComputeError("fit: the selected feature set has no columns");
  const Matrix x = take_columns(f.matrix, cols);
  const OlsModel ols = ols_fit(x, f.matrix.target);
  ForestParams fp = cfg.evaluation.forest;
  fp.seed = cfg.stage_seed(4);
  const RandomForest rf = rf_fit(x, f.matrix.target, fp);
  {
    auto o = out.open("ols_coefficients.csv");
    csv::Writer w(o);
    w.row({"term", "estimate"});
    w.row({"intercept", num(ols.intercept)});
    for (std::size_t j = 0; j < cols.size(); ++j) {
      w.row({f.matrix.columns[cols[j]], num(ols.coef[j])});
    }
  }
  {
    auto o = out.open("forest_importance.csv");
    csv::Writer w(o);
    w.row({"column", "mdi_pct"});
    for (std::size_t j = 0; j < cols.size(); ++j) {
      w.row({f.matrix.columns[cols[j]], num(rf.importance[j])});
    }
  }
  {
    auto o = out.open("fit_summary.csv");
    csv::Writer w(o);
    w.row({"model", "feature_set", "n", "p", "in_sample_rmse", "rank_deficient"});
    const std::string set(to_string(cfg.feature_set));
    w.row({"baseline", set, std::to_string(f.matrix.n()), "0", num(baseline_rmse(f.matrix.target)),
           "0"});
    w.row({"ols", set, std::to_string(f.matrix.n()), std::to_string(cols.size()),
           num(stats::rmse(ols_predict(ols, x), f.matrix.target)), ols.rank_deficient ? "1" : "0"});
    w.row({"random_forest", set, std::to_string(f.matrix.n()), std::to_string(cols.size()),
           num(stats::rmse(rf.predict(x), f.matrix.target)), "0"});
  }
}

struct Evaluated {
  EvaluationReport report;
  std::vector<std::pair<std::string, stats::CorrelationResult>> correlations;
  std::vector<std::pair<std::string, QuartileContrast>> contrasts;
  std::optional<std::string> top_topic;
  std::optional<std::string> top_embedding;
};

void write_corr_matrix(Output& out, const std::string& rel, const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns) {
  const auto cm = stats::correlation_matrix(columns);
  auto o = out.open(rel);
  csv::Writer w(o);
  std::vector<std::string> header{""};
  header.insert(header.end(), names.begin(), names.end());
  w.row(header);
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::vector<std::string> row{names[i]};
    for (std::size_t j = 0; j < names.size(); ++j) row.push_back(num_opt(cm[i][j].r));
    w.row(row);
  }
}

void write_scatter(Output& out, const std::string& stem, const Featurized& f,
                   const std::string& x_col, const std::optional<std::string>& y_col,
                   const std::string& title) {
  const auto& m = f.matrix;
  const auto xi = static_cast<std::size_t>(
      std::find(m.columns.begin(), m.columns.end(), x_col) - m.columns.begin());
  std::vector<double> x = m.column(xi), y = m.target;
  std::string y_name = "score";
  if (y_col) {
    const auto yi = static_cast<std::size_t>(
        std::find(m.columns.begin(), m.columns.end(), *y_col) - m.columns.begin());
    y = m.column(yi);
    y_name = *y_col;
  }
  {
    auto o = out.open(stem + ".csv");
    csv::Writer w(o);
    if (y_col) {
      w.row({"neighborhood_id", x_col, y_name, "score"});
    } else {
      w.row({"neighborhood_id", x_col, "score"});
    }
    for (std::size_t i = 0; i < m.n(); ++i) {
      if (y_col) {
        w.row({m.row_ids[i], num(x[i]), num(y[i]), num(m.target[i])});
      } else {
        w.row({m.row_ids[i], num(x[i]), num(m.target[i])});
      }
    }
  }
  out.text(stem + ".svg", scatter_svg(x, y, m.target, title, x_col, y_name));
}

Evaluated run_evaluation(Output& out, const RunConfig& cfg, const Prepared& p, const Featurized& f) {
  const auto& m = f.matrix;
  Evaluated ev;

  for (std::size_t j = 0; j < m.p(); ++j) {
    ev.correlations.emplace_back(m.columns[j], stats::pearson_r(m.column(j), m.target));
  }
  {
    auto o = out.open("correlations.csv");
    csv::Writer w(o);
    w.row({"feature", "r", "p_value", "n", "stars"});
    for (const auto& [name, c] : ev.correlations) {
      w.row({name, num_opt(c.r), num_opt(c.p_value), std::to_string(c.n), c.stars()});
    }
  }
  double best_topic = -1.0, best_emb = -1.0;
  for (const auto& [name, c] : ev.correlations) {
    if (!c.r) continue;
    const double a = std::abs(*c.r);
    if (name.starts_with("topic_") && a > best_topic) {
      best_topic = a;
      ev.top_topic = name;
    }
    if (name.starts_with("emb_") && a > best_emb) {
      best_emb = a;
      ev.top_embedding = name;
    }
  }

  {
    std::vector<std::vector<double>> columns;
    for (std::size_t j = 0; j < m.p(); ++j) columns.push_back(m.column(j));
    write_corr_matrix(out, "feature_crosscorr.csv", m.columns, columns);
  }
  {
    const ScoreTable& t = *p.table;
    const auto ms = measures_in(t);
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns(ms.size() + 1);
    for (auto meas : ms) names.push_back(fmt::format("change_{}", to_string(meas)));
    names.emplace_back("score");
    for (const auto& r : t.rows) {
      if (!p.targets.count(r.neighborhood_id)) continue;
      for (std::size_t k = 0; k < ms.size(); ++k) {
        columns[k].push_back(r.pct_tw.get(ms[k]) - r.pct_prev.get(ms[k]));
      }
      columns.back().push_back(r.score);
    }
    write_corr_matrix(out, "socio_crosscorr.csv", names, columns);
  }

  EvaluationProtocol protocol = cfg.evaluation;
  protocol.master_seed = cfg.stage_seed(3);
  ev.report = evaluate(m, protocol);
  const auto& rep = ev.report;
  {
    auto o = out.open("rmse_in_sample.csv");
    csv::Writer w(o);
    w.row({"model", "feature_set", "rmse", "n_columns"});
    w.row({"baseline", "none", num(rep.baseline_in_sample), "0"});
    for (const auto& s : rep.sets) {
      w.row({"ols", std::string(to_string(s.set)), num(s.ols_in_sample_rmse),
             std::to_string(s.n_columns)});
    }
  }
  {
    auto o = out.open("rmse_out_of_sample.csv");
    csv::Writer w(o);
    w.row({"model", "feature_set", "rmse_mean", "rmse_sd", "n_sims", "n_train", "n_test"});
    const auto n_test = std::to_string(rep.n_rows - rep.n_train);
    w.row({"baseline", "none", num(rep.baseline_oos_mean), num(rep.baseline_oos_sd),
           std::to_string(rep.n_sims), std::to_string(rep.n_train), n_test});
    for (const auto& s : rep.sets) {
      w.row({"random_forest", std::string(to_string(s.set)), num(s.rf_oos_mean), num(s.rf_oos_sd),
             std::to_string(rep.n_sims), std::to_string(rep.n_train), n_test});
    }
  }
  {
    auto o = out.open("rmse_by_sim.csv");
    csv::Writer w(o);
    w.row({"sim", "structured", "unstructured", "all"});
    for (std::size_t i = 0; i < rep.n_sims; ++i) {
      w.row({std::to_string(i), num(rep.sets[0].rf_oos_by_sim[i]), num(rep.sets[1].rf_oos_by_sim[i]),
             num(rep.sets[2].rf_oos_by_sim[i])});
    }
  }
  {
    std::vector<std::string> labels{"baseline (in)"};
    std::vector<double> values{rep.baseline_in_sample}, errors{0.0};
    for (const auto& s : rep.sets) {
      labels.push_back(fmt::format("OLS {}", to_string(s.set)));
      values.push_back(s.ols_in_sample_rmse);
      errors.push_back(0.0);
    }
    labels.emplace_back("baseline (out)");
    values.push_back(rep.baseline_oos_mean);
    errors.push_back(rep.baseline_oos_sd);
    for (const auto& s : rep.sets) {
      labels.push_back(fmt::format("RF {}", to_string(s.set)));
      values.push_back(s.rf_oos_mean);
      errors.push_back(s.rf_oos_sd);
    }
    out.text("rmse.svg", bar_svg(labels, values, errors,
                                 fmt::format("RMSE against the no-gentrification baseline ({})", cfg.city),
                                 "RMSE"));
  }
  {
    auto sorted = rep.mdi_all;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    {
      auto o = out.open("mdi.csv");
      csv::Writer w(o);
      w.row({"rank", "column", "mdi_pct"});
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        w.row({std::to_string(i + 1), sorted[i].first, num(sorted[i].second)});
      }
    }
    auto o = out.open("mdi_top5.csv");
    csv::Writer w(o);
    w.row({"rank", "column", "mdi_pct"});
    for (std::size_t i = 0; i < sorted.size() && i < 5; ++i) {
      w.row({std::to_string(i + 1), sorted[i].first, num(sorted[i].second)});
    }
  }

  // Per-review values pooled by neighborhood for the quartile contrasts.
  {
    const auto owner = listing_neighborhoods(p.listings);
    std::map<std::string, double> scores;
    for (std::size_t i = 0; i < m.n(); ++i) scores[m.row_ids[i]] = m.target[i];
    std::vector<std::string> names{"location_word_pct", "location_review", "sentiment",
                                   "review_length"};
    for (std::size_t k = 0; k < f.topics.k; ++k) names.push_back(fmt::format("topic_{}", k));
    std::vector<std::map<std::string, std::vector<double>>> values(names.size());
    for (const auto& r : f.per_review) {
      auto it = owner.find(r.listing_id);
      if (it == owner.end() || !scores.count(it->second)) continue;
      const auto& id = it->second;
      values[0][id].push_back(r.location_pct);
      values[1][id].push_back(r.location_review ? 1.0 : 0.0);
      values[2][id].push_back(r.sentiment);
      values[3][id].push_back(static_cast<double>(r.length));
      for (std::size_t k = 0; k < r.theta.size(); ++k) values[4 + k][id].push_back(r.theta[k]);
    }
    auto o = out.open("quartile_contrast.csv");
    csv::Writer w(o);
    w.row({"variable", "upper_mean", "lower_mean", "t", "p_value", "n_upper", "n_lower",
           "neighborhoods_upper", "neighborhoods_lower"});
    for (std::size_t v = 0; v < names.size(); ++v) {
      const auto q = quartile_contrast(scores, values[v]);
      ev.contrasts.emplace_back(names[v], q);
      w.row({names[v], num(q.upper_mean), num(q.lower_mean), num(q.t), num(q.p_value),
             std::to_string(q.n_upper), std::to_string(q.n_lower),
             std::to_string(q.neighborhoods_upper), std::to_string(q.neighborhoods_lower)});
    }
  }

  if (ev.top_topic) {
    write_scatter(out, "scatter_topic", f, *ev.top_topic, std::nullopt,
                  fmt::format("Most correlated topic share vs score ({})", cfg.city));
  }
  if (ev.top_embedding) {
    write_scatter(out, "scatter_embedding", f, *ev.top_embedding, std::nullopt,
                  fmt::format("Most correlated embedding component vs score ({})", cfg.city));
  }
  if (ev.top_topic && ev.top_embedding) {
    write_scatter(out, "scatter_components", f, *ev.top_topic, ev.top_embedding,
                  fmt::format("Neighborhoods coloured by gentrification score ({})", cfg.city));
  }

  json j;
  j["city"] = cfg.city;
  j["seed"] = cfg.require_seed();
  j["evaluation_seed"] = rep.master_seed;
  j["n_rows"] = rep.n_rows;
  j["n_train"] = rep.n_train;
  j["n_sims"] = rep.n_sims;
  j["baseline"] = {{"in_sample", rep.baseline_in_sample},
                   {"out_of_sample_mean", rep.baseline_oos_mean},
                   {"out_of_sample_sd", rep.baseline_oos_sd}};
  for (const auto& s : rep.sets) {
    j["sets"][std::string(to_string(s.set))] = {{"n_columns", s.n_columns},
                                                {"ols_in_sample_rmse", s.ols_in_sample_rmse},
                                                {"ols_rank_deficient", s.ols_rank_deficient},
                                                {"rf_oos_mean", s.rf_oos_mean},
                                                {"rf_oos_sd", s.rf_oos_sd}};
  }
  j["top_topic"] = ev.top_topic ? json(*ev.top_topic) : json(nullptr);
  j["top_embedding"] = ev.top_embedding ? json(*ev.top_embedding) : json(nullptr);
  out.text("evaluation.json", j.dump(2) + "\n");
  return ev;
}

// ---------------------------------------------------------------------------
// Markdown report

std::string md_table(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::string s = "| " + fmt::format("{}", fmt::join(header, " | ")) + " |\n|";
  for (std::size_t i = 0; i < header.size(); ++i) s += " --- |";
  s += "\n";
  for (const auto& r : rows) s += "| " + fmt::format("{}", fmt::join(r, " | ")) + " |\n";
  return s + "\n";
}

std::string fixed(double v, int digits = 3) { return fmt::format("{:.{}f}", v, digits); }

std::string render_report(const RunConfig& cfg, const Prepared& p, const Featurized& f,
                          const Evaluated& ev) {
  std::string s = fmt::format("# Gentrification report: {}\n\n", cfg.city);
  s += fmt::format("Master seed {}. Target `{}`, population `{}`.\n\n", cfg.require_seed(),
                   p.table->spec.name,
                   cfg.population == Population::all ? "all" : "disadvantaged");

  s += "## Corpus\n\n";
  s += md_table({"item", "count"},
                {{"listings (active neighborhoods)", std::to_string(p.listings.size())},
                 {"reviews (filtered)", std::to_string(p.reviews.size())},
                 {"active neighborhoods", std::to_string(p.active.active.size())},
                 {"removed neighborhoods", std::to_string(p.active.removed.size())},
                 {"scored neighborhoods", std::to_string(p.table->rows.size())},
                 {"disadvantaged neighborhoods", std::to_string(p.table->disadvantaged_count())},
                 {"modelled neighborhoods", std::to_string(f.matrix.n())}});

  s += "## Score summary\n\n";
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : summarize_scores(*p.table)) {
      rows.push_back({r.measure, r.period, fixed(r.median), fixed(r.sd)});
    }
    s += md_table({"measure", "period", "median", "SD"}, rows);
  }

  s += "## Feature summary\n\n";
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : summarize_features(f.matrix)) {
      rows.push_back({r.column, fixed(r.median), fixed(r.sd)});
    }
    s += md_table({"feature", "median", "SD"}, rows);
  }

  s += "## Correlation with the score\n\n";
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [name, c] : ev.correlations) {
      rows.push_back({name, c.r ? fixed(*c.r) + c.stars() : "n/a", std::to_string(c.n)});
    }
    s += md_table({"feature", "r", "n"}, rows);
    s += "Stars: *** p<0.01, ** p<0.05, * p<0.1.\n\n";
  }

  const auto& rep = ev.report;
  s += "## RMSE\n\n";
  {
    std::vector<std::vector<std::string>> rows{{"baseline", "-", fixed(rep.baseline_in_sample),
                                                fmt::format("{} ({})", fixed(rep.baseline_oos_mean),
                                                            fixed(rep.baseline_oos_sd))}};
    for (const auto& e : rep.sets) {
      rows.push_back({"OLS / RF", std::string(to_string(e.set)), fixed(e.ols_in_sample_rmse),
                      fmt::format("{} ({})", fixed(e.rf_oos_mean), fixed(e.rf_oos_sd))});
    }
    s += md_table({"model", "features", "in-sample", "out-of-sample mean (SD)"}, rows);
    s += fmt::format("{} random splits, {} training and {} test neighborhoods.\n\n", rep.n_sims,
                     rep.n_train, rep.n_rows - rep.n_train);
  }

  s += "## Most important features (random forest, all features)\n\n";
  {
    auto sorted = rep.mdi_all;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < sorted.size() && i < 5; ++i) {
      rows.push_back({std::to_string(i + 1), sorted[i].first, fixed(sorted[i].second, 2)});
    }
    s += md_table({"rank", "feature", "MDI %"}, rows);
  }

  s += "## Upper versus lower score quartile\n\n";
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [name, q] : ev.contrasts) {
      rows.push_back({name, fixed(q.upper_mean), fixed(q.lower_mean), fixed(q.t, 2),
                      fmt::format("{:.3g}", q.p_value)});
    }
    s += md_table({"variable", "upper mean", "lower mean", "t", "p"}, rows);
  }

  s += "## Topics\n\n";
  if (f.selection) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [k, perp] : f.selection->perplexities) {
      rows.push_back({std::to_string(k), fixed(perp, 2), k == f.selection->best_k ? "yes" : ""});
    }
    s += md_table({"K", "held-out perplexity", "selected"}, rows);
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < f.topics.k; ++k) {
      std::vector<std::string> words;
      for (const auto& [term, w] : top_words(f.topics, k, 10)) words.push_back(term);
      rows.push_back({std::to_string(k), k < cfg.topic_labels.size() ? cfg.topic_labels[k] : "",
                      fmt::format("{}", fmt::join(words, ", "))});
    }
    s += md_table({"topic", "label", "top words"}, rows);
  }
  if (ev.top_topic || ev.top_embedding) {
    s += fmt::format("Most correlated topic share: `{}`. Most correlated embedding component: `{}`.\n",
                     ev.top_topic.value_or("n/a"), ev.top_embedding.value_or("n/a"));
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Stages

Prepared prepare(const RunConfig& cfg) {
  require_file(cfg.paths.listings, "paths.listings");
  require_file(cfg.paths.reviews, "paths.reviews");
  require_file(cfg.paths.socio_tw_minus_1, "paths.socio_tw_minus_1");
  require_file(cfg.paths.socio_tw, "paths.socio_tw");
  optional_file(cfg.paths.dictionary, "paths.dictionary");
  optional_file(cfg.paths.lexicon, "paths.lexicon");
  optional_file(cfg.paths.emoji_lexicon, "paths.emoji_lexicon");
  optional_file(cfg.paths.topic_model, "paths.topic_model");
  optional_file(cfg.paths.embedding_model, "paths.embedding_model");

  Prepared p;
  auto listings = ingest_listings(cfg.paths.listings, cfg.corpus);
  auto reviews = ingest_reviews(cfg.paths.reviews, cfg.corpus);
  auto prev = ingest_socio(cfg.paths.socio_tw_minus_1, Window::tw_minus_1, cfg.corpus.delimiter);
  auto curr = ingest_socio(cfg.paths.socio_tw, Window::tw, cfg.corpus.delimiter);
  p.listings_report = listings.report;
  p.reviews_report = reviews.report;
  p.socio_prev_report = prev.report;
  p.socio_curr_report = curr.report;
  for (const auto* r : {&p.listings_report, &p.reviews_report, &p.socio_prev_report,
                        &p.socio_curr_report}) {
    if (!r->errors.empty()) {
      log(fmt::format("{}: {} malformed rows skipped", r->source, r->errors.size()));
    }
  }

  auto lang = filter_language(reviews.items, cfg.corpus.language);
  p.excluded_other_language = lang.excluded_other_language;
  p.excluded_undetectable = lang.excluded_undetectable;
  p.active = filter_neighborhoods(listings.items, lang.retained, cfg.corpus);
  p.listings = restrict_listings(listings.items, p.active.active);
  const auto owner = listing_neighborhoods(p.listings);
  std::vector<Review> kept;
  for (auto& r : lang.retained) {
    if (owner.count(r.listing_id)) {
      kept.push_back(std::move(r));
    } else {
      ++p.reviews_outside_active;
    }
  }
  p.reviews = canonical_order(std::move(kept));
  p.panel = build_panel(prev.items, curr.items);
  if (!p.panel.flagged.empty()) {
    log(fmt::format("{} neighborhoods appear in only one census window", p.panel.flagged.size()));
  }
  return p;
}

void score(const RunConfig& cfg, Prepared& p) {
  p.table = build_target(p.panel, cfg.target, cfg.country);
  p.targets = p.table->scores(cfg.population == Population::disadvantaged);
}

Featurized featurize(const RunConfig& cfg, const Prepared& p) {
  Featurized f;
  f.dictionary = cfg.paths.dictionary.empty() ? LocationDictionary::builtin()
                                              : LocationDictionary::load(cfg.paths.dictionary);
  f.lexicon = cfg.paths.lexicon.empty()
                  ? SentimentLexicon::builtin()
                  : SentimentLexicon::load(cfg.paths.lexicon, cfg.paths.emoji_lexicon);

  const auto docs = tokenize_all(p.reviews);
  if (!cfg.paths.topic_model.empty()) {
    f.topics = TopicModel::load(cfg.paths.topic_model);
  } else {
    LdaParams lda = cfg.lda;
    if (cfg.select_topics) {
      log(fmt::format("selecting the topic count over {} candidates", cfg.topic_candidates.size()));
      f.selection = select_k(docs, cfg.topic_candidates, lda, cfg.topic_holdout);
      lda.k = f.selection->best_k;
    }
    log(fmt::format("fitting {} topics on {} reviews", lda.k, docs.size()));
    f.topics = fit_lda(docs, lda);
  }
  if (!cfg.paths.embedding_model.empty()) {
    f.embeddings = EmbeddingModel::load(cfg.paths.embedding_model);
  } else {
    log(fmt::format("training {}-dimensional document vectors", cfg.embeddings.dim));
    f.embeddings = fit_embeddings(docs, cfg.embeddings);
  }

  f.tokens.reserve(p.reviews.size());
  for (const auto& r : p.reviews) f.tokens.push_back(preprocess(r.text));

  TextResources res;
  res.dictionary = &f.dictionary;
  res.lexicon = &f.lexicon;
  res.rules = cfg.sentiment;
  res.topics = &f.topics;
  res.embeddings = &f.embeddings;
  f.per_review = review_features(p.reviews, res, cfg.threads);
  f.vectors = build_features(p.listings, f.per_review, p.active.active);
  AssembleOptions opts;
  opts.include_subratings = cfg.include_subratings;
  f.matrix = assemble_matrix(f.vectors, p.targets, opts);
  if (!f.matrix.excluded_no_features.empty()) {
    log(fmt::format("{} scored neighborhoods have no active listings",
                    f.matrix.excluded_no_features.size()));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

enum class Stage { ingest, score, featurize, fit, evaluate, report };

void run_stages(const RunConfig& cfg, Stage last, const std::string& name) {
  cfg.require_seed();
  Output out(cfg, name);
  Prepared p = prepare(cfg);
  write_ingest(out, p);
  if (last >= Stage::score) {
    score(cfg, p);
    write_scores(out, cfg, p);
  }
  if (last >= Stage::featurize) {
    const Featurized f = featurize(cfg, p);
    write_features(out, cfg, f);
    if (last >= Stage::fit) write_fit(out, cfg, f);
    if (last >= Stage::evaluate) {
      log(fmt::format("evaluating over {} simulations", cfg.evaluation.n_sims));
      const Evaluated ev = run_evaluation(out, cfg, p, f);
      if (last >= Stage::report) out.text("report.md", render_report(cfg, p, f, ev));
    }
  }
  out.finish();
}

}  // namespace

void cmd_ingest(const RunConfig& cfg) { run_stages(cfg, Stage::ingest, "ingest"); }
void cmd_score(const RunConfig& cfg) { run_stages(cfg, Stage::score, "score"); }
void cmd_featurize(const RunConfig& cfg) { run_stages(cfg, Stage::featurize, "featurize"); }
void cmd_fit(const RunConfig& cfg) { run_stages(cfg, Stage::fit, "fit"); }
void cmd_evaluate(const RunConfig& cfg) { run_stages(cfg, Stage::evaluate, "evaluate"); }
void cmd_report(const RunConfig& cfg) { run_stages(cfg, Stage::report, "report"); }

void cmd_synth(const RunConfig& cfg) {
  SynthConfig sc = cfg.synth;
  sc.seed = cfg.require_seed();
  Output out(cfg, "synth");
  const SynthCity city = generate_city(sc);
  const auto paths = write_city(city, cfg.out);

  json run;
  run["seed"] = sc.seed;
  run["city"] = cfg.city;
  run["country"] = std::string(to_string(sc.country));
  run["paths"] = {{"listings", paths[0].generic_string()},
                  {"reviews", paths[1].generic_string()},
                  {"socio_tw_minus_1", paths[2].generic_string()},
                  {"socio_tw", paths[3].generic_string()}};
  for (const auto& path : paths) out.record(path.filename().string());
  out.text("config.json", run.dump(2) + "\n");
  out.finish();
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"ingest", "score",    "featurize", "fit",
                                              "evaluate", "report", "synth"};
  return names;
}

int run_command(const std::string& name, const RunConfig& cfg) {
  try {
    if (name == "ingest") {
      cmd_ingest(cfg);
    } else if (name == "score") {
      cmd_score(cfg);
    } else if (name == "featurize") {
      cmd_featurize(cfg);
    } else if (name == "fit") {
      cmd_fit(cfg);
    } else if (name == "evaluate") {
      cmd_evaluate(cfg);
    } else if (name == "report") {
      cmd_report(cfg);
    } else if (name == "synth") {
      cmd_synth(cfg);
    } else {
      throw ConfigError(fmt::format("unknown command '{}'", name));
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "gentricast {}: error: {}\n", name, e.what());
    return exit_code_for(e);
  }
  return kOk;
}

}  // namespace gentricast::cli

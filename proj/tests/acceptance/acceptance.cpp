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


// Acceptance suite. Prints one PASS/FAIL line per criterion with the
// measured values; exits nonzero when a required criterion fails. The
// replication tier needs the original city extracts and is reported
// as SKIP when GENTRICAST_REPLICATION_DIR is unset or empty.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "gentricast/cli/commands.hpp"
#include "gentricast/cli/config.hpp"
#include "gentricast/embeddings.hpp"
#include "gentricast/evaluation.hpp"
#include "gentricast/forest.hpp"
#include "gentricast/ols.hpp"
#include "gentricast/rng.hpp"
#include "gentricast/scoring.hpp"
#include "gentricast/sentiment.hpp"
#include "gentricast/stats.hpp"
#include "gentricast/synth.hpp"
#include "gentricast/topics.hpp"
#include "oracles/oracles.hpp"

namespace fs = std::filesystem;
using namespace gentricast;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
  Status status;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Matrix gaussian(std::mt19937_64& gen, std::size_t n, std::size_t p) {
  std::normal_distribution<double> nd;
  Matrix x(n, std::vector<double>(p));
  for (auto& r : x) {
    for (auto& v : r) v = nd(gen);
  }
  return x;
}

Matrix columns_of(const Matrix& x, std::size_t from, std::size_t to) {
  Matrix out;
  for (const auto& r : x) out.emplace_back(r.begin() + static_cast<long>(from), r.begin() + static_cast<long>(to));
  return out;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("gentricast_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

cli::RunConfig city_config(const fs::path& dir, std::uint64_t seed,
                           std::vector<std::pair<std::string, std::string>> extra = {}) {
  std::vector<std::pair<std::string, std::string>> o{
      {"seed", std::to_string(seed)},
      {"out", nlohmann::json((dir / "out").string()).dump()},
      {"paths.listings", nlohmann::json((dir / "listings.csv").string()).dump()},
      {"paths.reviews", nlohmann::json((dir / "reviews.csv").string()).dump()},
      {"paths.socio_tw_minus_1", nlohmann::json((dir / "socio_tw_minus_1.csv").string()).dump()},
      {"paths.socio_tw", nlohmann::json((dir / "socio_tw.csv").string()).dump()},
      {"scoring.population", "\"all\""}};
  o.insert(o.end(), extra.begin(), extra.end());
  return cli::load_config(std::nullopt, o);
}

// ---------------------------------------------------------------------------

Outcome ols_dominance() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(2026);
  std::normal_distribution<double> nd;
  double worst = -INFINITY;
  for (int d = 0; d < 50; ++d) {
    const std::size_t n = 30 + gen() % 200;
    const std::size_t ps = 1 + gen() % 8;
    const std::size_t pu = 1 + gen() % 12;
    const Matrix x = gaussian(gen, n, ps + pu);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 3.0 * nd(gen) + x[i][0] - 0.5 * x[i][ps];
    auto rmse_of = [&](const Matrix& m) { return stats::rmse(ols_predict(ols_fit(m, y), m), y); };
    const double all = rmse_of(x);
    const double s = rmse_of(columns_of(x, 0, ps));
    const double u = rmse_of(columns_of(x, ps, ps + pu));
    const double b = baseline_rmse(y);
    worst = std::max({worst, all - s, all - u, all - b});
  }
  const double secs = seconds_since(t0);
  const bool ok = worst <= 1e-9 && secs < 10.0;
  return {ok ? Status::pass : Status::fail,
          fmt::format("50 datasets, max RMSE(all) - min(other) = {:.3g}, {:.2f} s", worst, secs)};
}

Outcome planted_signal() {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;

  const auto dir = scratch("planted");
  SynthConfig sc;
  sc.seed = 2026;
  write_city(generate_city(sc), dir);
  const auto cfg = city_config(dir, 2026);
  auto p = cli::prepare(cfg);
  cli::score(cfg, p);
  const auto f = cli::featurize(cfg, p);
  const auto& m = f.matrix;
  const auto j = static_cast<std::size_t>(
      std::find(m.columns.begin(), m.columns.end(), "location_word_pct") - m.columns.begin());
  const auto r = stats::pearson_r(m.column(j), m.target);
  const double rv = r.r.value_or(0.0);
  ok = ok && rv >= 0.8;
  auto protocol = cfg.evaluation;
  protocol.master_seed = cfg.stage_seed(3);
  const auto rep = evaluate(m, protocol);
  const auto& all = rep.get(FeatureSet::all);
  const double ratio = all.rf_oos_mean / rep.baseline_oos_mean;
  ok = ok && ratio <= 0.7;
  detail += fmt::format("n={} r(location_word_pct, score)={:.3f}; RF(all) {:.3f} (SD {:.3f}) vs baseline {:.3f} "
                        "(SD {:.3f}) over {} sims, ratio {:.3f}",
                        m.n(), rv, all.rf_oos_mean, all.rf_oos_sd, rep.baseline_oos_mean,
                        rep.baseline_oos_sd, rep.n_sims, ratio);

  const auto null_dir = scratch("null");
  SynthConfig nc = sc;
  nc.location_rate_slope = 0.0;
  write_city(generate_city(nc), null_dir);
  const auto ncfg = city_config(null_dir, 2026);
  auto np = cli::prepare(ncfg);
  cli::score(ncfg, np);
  const auto nf = cli::featurize(ncfg, np);
  const auto nj = static_cast<std::size_t>(
      std::find(nf.matrix.columns.begin(), nf.matrix.columns.end(), "location_word_pct") -
      nf.matrix.columns.begin());
  const double nr = stats::pearson_r(nf.matrix.column(nj), nf.matrix.target).r.value_or(0.0);
  ok = ok && std::abs(nr) < 0.15;
  const double secs = seconds_since(t0);
  ok = ok && secs < 300.0;
  detail += fmt::format("; null control r={:.3f}; {:.1f} s", nr, secs);
  fs::remove_all(dir);
  fs::remove_all(null_dir);
  return {ok ? Status::pass : Status::fail, detail};
}

std::vector<Document> disjoint_corpus(std::size_t groups, std::size_t docs, std::size_t vocab,
                                      std::size_t length, std::uint64_t seed,
                                      std::vector<std::size_t>& labels) {
  std::mt19937_64 gen(seed);
  std::vector<Document> out;
  for (std::size_t d = 0; d < docs; ++d) {
    const std::size_t g = gen() % groups;
    labels.push_back(g);
    Document doc;
    for (std::size_t i = 0; i < length; ++i) {
      doc.push_back(fmt::format("t{}w{}", g, gen() % vocab));
    }
    out.push_back(std::move(doc));
  }
  return out;
}

Outcome lda_recovery() {
  std::size_t hits = 0;
  double mass_total = 0.0;
  std::size_t mass_n = 0;
  double worst_sum = 0.0;
  std::vector<std::size_t> picks;
  for (std::uint64_t s = 0; s < 10; ++s) {
    std::vector<std::size_t> labels;
    const auto docs = disjoint_corpus(3, 300, 15, 40, 100 + s, labels);
    LdaParams p;
    p.alpha = 0.1;
    p.iterations = 300;
    p.burn_in = 100;
    p.min_count = 1;
    p.infer_iterations = 50;
    p.infer_burn_in = 10;
    p.seed = derive_seed(2026, s);
    const auto sel = select_k(docs, {2, 3, 4, 5, 6}, p);
    picks.push_back(sel.best_k);
    if (sel.best_k == 3) ++hits;
    p.k = 3;
    const auto model = fit_lda(docs, p);
    const std::size_t v = model.vocab.size();
    for (std::size_t k = 0; k < model.k; ++k) {
      double sum = 0.0;
      for (std::size_t w = 0; w < v; ++w) sum += model.phi_at(k, w);
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
    for (const auto& d : docs) {
      const auto theta = infer_topics(model, d);
      worst_sum = std::max(worst_sum, std::abs(std::accumulate(theta.begin(), theta.end(), 0.0) - 1.0));
      mass_total += *std::max_element(theta.begin(), theta.end());
      ++mass_n;
    }
  }
  const double mass = mass_total / static_cast<double>(mass_n);
  const bool ok = hits >= 8 && mass >= 0.85 && worst_sum <= 1e-9;
  return {ok ? Status::pass : Status::fail,
          fmt::format("K=3 chosen in {}/10 seeds (picks {}), mean dominant mass {:.3f}, max |sum-1| {:.2g}",
                      hits, fmt::join(picks, ","), mass, worst_sum)};
}

Outcome embedding_property() {
  std::vector<std::size_t> labels;
  const auto docs = disjoint_corpus(2, 1000, 30, 30, 7, labels);
  EmbeddingParams p;
  p.seed = 2026;
  p.min_count = 1;
  const auto a = fit_embeddings(docs, p);
  const auto b = fit_embeddings(docs, p);
  bool dims = a.dim() == 25 && a.doc_vectors.size() == docs.size() * 25 &&
              a.word_vectors.size() == a.vocab.size() * 25;
  bool exact = a.doc_vectors == b.doc_vectors && a.word_vectors == b.word_vectors;
  double within = 0, across = 0;
  std::size_t nw = 0, na = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto vi = infer_vector(a, docs[i]);
    dims = dims && vi.size() == 25;
    exact = exact && vi == infer_vector(b, docs[i]);
    for (std::size_t j = i + 1; j < 200; ++j) {
      const double c = cosine(a.doc_vector(i), a.doc_vector(j));
      if (labels[i] == labels[j]) {
        within += c;
        ++nw;
      } else {
        across += c;
        ++na;
      }
    }
  }
  const double margin = within / static_cast<double>(nw) - across / static_cast<double>(na);
  const bool ok = dims && exact && margin >= 0.2;
  return {ok ? Status::pass : Status::fail,
          fmt::format("dim 25 contract {}, cosine margin {:.3f}, bit-exact rerun {}", dims ? "held" : "broken",
                      margin, exact ? "yes" : "no")};
}

Outcome sentiment_oracle() {
  std::ifstream in(std::string(GENTRICAST_TEST_DIR) + "/fixtures/sentiment_fixture.tsv");
  if (!in) return {Status::fail, "fixture missing"};
  const auto& lex = SentimentLexicon::builtin();
  std::string line;
  std::size_t n = 0, matched = 0;
  double worst = 0.0;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    const auto tab = line.rfind('\t');
    const double expected = std::stod(line.substr(tab + 1));
    const double err = std::abs(score_sentiment(line.substr(0, tab), lex) - expected);
    worst = std::max(worst, err);
    ++n;
    if (err <= 1e-4) ++matched;
  }
  std::mt19937_64 gen(5);
  const std::vector<std::string> words{"great", "not", "very", "BAD", "but", "!!", "?", ":(", "never",
                                       "kind of", "LOVE", "terrible", "without", "doubt", "x"};
  std::size_t inside = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    for (std::size_t k = gen() % 30; k > 0; --k) {
      s += gen() % 7 == 0 ? std::string(1, static_cast<char>(gen() % 256)) : words[gen() % words.size()];
      s += ' ';
    }
    const double c = score_sentiment(s, lex);
    if (c > -1.0 && c < 1.0) ++inside;
  }
  const bool ok = n == 50 && matched == n && inside == 10000;
  return {ok ? Status::pass : Status::fail,
          fmt::format("{}/{} fixture sentences within 1e-4 (max err {:.2g}); {}/10000 fuzz scores in (-1, 1)",
                      matched, n, worst, inside)};
}

Outcome brute_force() {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> nd;
  std::size_t pct_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> v(1 + gen() % 80);
    for (auto& x : v) x = static_cast<double>(gen() % 20) + (gen() % 3 == 0 ? 0.5 : 0.0);
    if (percentile_rank(v) == oracle::hazen_percentiles(v)) ++pct_ok;
  }
  double corr_err = 0, welch_err = 0, ols_err = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 5 + gen() % 60;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = nd(gen);
      y[i] = 0.4 * x[i] + nd(gen);
    }
    corr_err = std::max(corr_err, std::abs(*stats::pearson_r(x, y).r - oracle::pearson(x, y)));
    std::vector<double> b(3 + gen() % 40);
    for (auto& v : b) v = 1.0 + 1.5 * nd(gen);
    const auto w = stats::welch_t_test(x, b);
    const auto o = oracle::welch(x, b);
    welch_err = std::max({welch_err, std::abs(w.t - o.t), std::abs(w.p_value - o.p)});
    const std::size_t p = 1 + gen() % 5;
    const Matrix xm = gaussian(gen, p + 10 + gen() % 50, p);
    std::vector<double> ym;
    for (const auto& r : xm) ym.push_back(2.0 + r[0] + nd(gen));
    const auto model = ols_fit(xm, ym);
    const auto beta = oracle::ols_normal_equations(xm, ym);
    ols_err = std::max(ols_err, std::abs(model.intercept - beta[0]));
    for (std::size_t j = 0; j < p; ++j) ols_err = std::max(ols_err, std::abs(model.coef[j] - beta[j + 1]));
  }
  double mdi_err = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t p = 1 + gen() % 10;
    const Matrix xm = gaussian(gen, 20 + gen() % 60, p);
    std::vector<double> ym;
    for (const auto& r : xm) ym.push_back(r[0] * r[p - 1] + nd(gen));
    ForestParams fp;
    fp.n_trees = 20;
    fp.seed = gen();
    const auto imp = mdi_importance(rf_fit(xm, ym, fp));
    mdi_err = std::max(mdi_err, std::abs(std::accumulate(imp.begin(), imp.end(), 0.0) - 100.0));
  }
  const bool ok = pct_ok == 1000 && corr_err <= 1e-9 && welch_err <= 1e-9 && ols_err <= 1e-9 &&
                  mdi_err <= 1e-6;
  return {ok ? Status::pass : Status::fail,
          fmt::format("percentiles exact {}/1000; max err pearson {:.2g}, welch {:.2g}, OLS {:.2g}; "
                      "MDI |sum-100| {:.2g} over 100 forests",
                      pct_ok, corr_err, welch_err, ols_err, mdi_err)};
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[e.path().lexically_relative(root).generic_string()] = ss.str();
  }
  return out;
}

Outcome determinism() {
  const auto dir = scratch("determinism");
  SynthConfig sc;
  sc.seed = 77;
  sc.n_neighborhoods = 120;
  write_city(generate_city(sc), dir);
  auto a = city_config(dir, 77, {{"out", nlohmann::json((dir / "run_a").string()).dump()}});
  auto b = city_config(dir, 77, {{"out", nlohmann::json((dir / "run_b").string()).dump()}});
  cli::cmd_evaluate(a);
  cli::cmd_evaluate(b);
  auto ta = read_tree(dir / "run_a");
  auto tb = read_tree(dir / "run_b");
  // The manifests echo their own output directory; compare their checksums.
  const auto ma = nlohmann::json::parse(ta.at("manifest.json"));
  const auto mb = nlohmann::json::parse(tb.at("manifest.json"));
  ta.erase("manifest.json");
  tb.erase("manifest.json");
  std::size_t differing = 0;
  for (const auto& [name, body] : ta) {
    if (!tb.count(name) || tb.at(name) != body) ++differing;
  }
  const bool same_keys = ta.size() == tb.size();
  const bool same_manifest = ma["artifacts"] == mb["artifacts"] && ma["seed"] == mb["seed"];
  fs::remove_all(dir);
  const bool ok = differing == 0 && same_keys && same_manifest && !ta.empty();
  return {ok ? Status::pass : Status::fail,
          fmt::format("{} artifacts compared, {} differ; manifest checksums {}", ta.size(), differing,
                      same_manifest ? "identical" : "differ")};
}

Outcome replication() {
  const char* env = std::getenv("GENTRICAST_REPLICATION_DIR");
  if (env == nullptr || !fs::is_directory(env)) {
    return {Status::skip, "city extracts not available (set GENTRICAST_REPLICATION_DIR)"};
  }
  // One sub-directory per city holding a config.json for the CLI.
  struct Target {
    const char* city;
    double r_listings;
    double rf_oos;
  };
  const Target targets[] = {{"ny", 0.682, 9.23}, {"la", 0.397, 12.64}, {"london", 0.547, 13.95}};
  std::string detail;
  bool ok = true;
  std::size_t found = 0;
  for (const auto& t : targets) {
    const fs::path cfg_path = fs::path(env) / t.city / "config.json";
    if (!fs::exists(cfg_path)) continue;
    ++found;
    const auto cfg = cli::load_config(cfg_path, {});
    auto p = cli::prepare(cfg);
    cli::score(cfg, p);
    const auto f = cli::featurize(cfg, p);
    const auto& m = f.matrix;
    const auto j = static_cast<std::size_t>(
        std::find(m.columns.begin(), m.columns.end(), "n_listings") - m.columns.begin());
    const double r = j < m.columns.size() ? stats::pearson_r(m.column(j), m.target).r.value_or(0.0) : 0.0;
    auto protocol = cfg.evaluation;
    protocol.master_seed = cfg.stage_seed(3);
    const auto rep = evaluate(m, protocol);
    const double base = baseline_rmse(m.target);
    const double rf = rep.get(FeatureSet::all).rf_oos_mean;
    const bool r_ok = std::abs(r - t.r_listings) <= 0.05;
    const bool base_ok = base >= 14.70 * 0.95 && base <= 17.82 * 1.05;
    const bool rf_ok = std::abs(rf - t.rf_oos) <= 0.15 * t.rf_oos;
    ok = ok && r_ok && base_ok && rf_ok;
    detail += fmt::format("{}: r(listings) {:.3f} vs {:.3f} {}, baseline {:.2f} {}, RF {:.2f} vs {:.2f} {}; ", t.city,
                          r, t.r_listings, r_ok ? "ok" : "off", base, base_ok ? "ok" : "off", rf, t.rf_oos,
                          rf_ok ? "ok" : "off");
  }
  if (found == 0) return {Status::skip, "no city configs under GENTRICAST_REPLICATION_DIR"};
  return {ok ? Status::pass : Status::fail, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    bool required;
  };
  const std::vector<Criterion> criteria{
      {1, "OLS dominance", ols_dominance, true},
      {2, "planted-signal recovery", planted_signal, true},
      {3, "LDA recovery", lda_recovery, true},
      {4, "embedding properties", embedding_property, true},
      {5, "sentiment oracle", sentiment_oracle, true},
      {6, "brute-force equivalence", brute_force, true},
      {7, "determinism", determinism, true},
      {8, "replication tier (optional)", replication, false}};
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Status::fail, fmt::format("threw: {}", e.what())};
    }
    const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
    fmt::print("{} {} {}: {}\n", tag, c.id, c.name, o.detail);
    std::fflush(stdout);
    if (o.status == Status::fail && c.required) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

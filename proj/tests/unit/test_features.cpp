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


#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "gentricast/error.hpp"
#include "gentricast/features.hpp"
#include "gentricast/stats.hpp"
#include "gentricast/synth.hpp"
#include "oracles/oracles.hpp"

using namespace gentricast;

namespace {

struct Fixture {
  std::vector<Listing> listings;
  std::vector<Review> reviews;
  TopicModel topics;
  EmbeddingModel embeddings;
  TextResources res;

  Fixture() {
    for (int i = 0; i < 3; ++i) {
      listings.push_back({"A" + std::to_string(i), "A", 100.0 + i, 1, 4.5, 9, {{"cleanliness", 9}}});
      listings.push_back({"B" + std::to_string(i), "B", 50.0 + i, 2, std::nullopt, 8, {}});
      listings.push_back({"C" + std::to_string(i), "C", 70.0, 1, 4.0, std::nullopt, {}});
    }
    const std::vector<std::string> texts{"Great subway and park nearby!", "The host was terrible.",
                                         "Lovely restaurants near the station",
                                         "Dirty towels and a noisy street"};
    for (int i = 0; i < 8; ++i) {
      Review r;
      r.review_id = "R" + std::to_string(7 - i);
      r.listing_id = (i % 2 ? "A" : "B") + std::to_string(i % 3);
      r.text = texts[static_cast<std::size_t>(i) % texts.size()];
      reviews.push_back(r);
    }
    reviews = canonical_order(reviews);
    const auto docs = tokenize_all(reviews);
    LdaParams lp;
    lp.k = 3;
    lp.iterations = 20;
    lp.burn_in = 5;
    lp.min_count = 1;
    topics = fit_lda(docs, lp);
    EmbeddingParams ep;
    ep.dim = 4;
    ep.epochs = 2;
    ep.min_count = 1;
    embeddings = fit_embeddings(docs, ep);
    res.dictionary = &LocationDictionary::builtin();
    res.lexicon = &SentimentLexicon::builtin();
    res.topics = &topics;
    res.embeddings = &embeddings;
  }
};

}  // namespace

TEST_SUITE("features") {
  TEST_CASE("canonical order sorts by review id") {
    Fixture f;
    CHECK(std::is_sorted(f.reviews.begin(), f.reviews.end(),
                         [](const Review& a, const Review& b) { return a.review_id < b.review_id; }));
  }

  TEST_CASE("column count is 6 structured + 4 scalar unstructured + K + D") {
    Fixture f;
    const auto rf = review_features(f.reviews, f.res);
    const auto vecs = build_features(f.listings, rf, {"A", "B", "C"});
    const std::map<std::string, double> targets{{"A", 1.0}, {"B", -1.0}, {"C", 0.5}};
    const auto m = assemble_matrix(vecs, targets);
    CHECK(m.p() == 6 + 4 + 3 + 4);
    CHECK(m.n_structured == structured_column_count({}));
    CHECK(m.select(FeatureSet::structured).size() == 6);
    CHECK(m.select(FeatureSet::unstructured).size() == 11);
    CHECK(m.select(FeatureSet::all).size() == 17);
    AssembleOptions with_subs;
    with_subs.include_subratings = true;
    CHECK(assemble_matrix(vecs, targets, with_subs).p() > m.p());
  }

  TEST_CASE("zero-review neighborhood is imputed with column medians and flagged") {
    Fixture f;
    const auto rf = review_features(f.reviews, f.res);
    const auto vecs = build_features(f.listings, rf, {"A", "B", "C"});
    const auto m = assemble_matrix(vecs, {{"A", 1.0}, {"B", -1.0}, {"C", 0.5}});
    const auto c = static_cast<std::size_t>(std::find(m.row_ids.begin(), m.row_ids.end(), "C") -
                                            m.row_ids.begin());
    const auto j = static_cast<std::size_t>(
        std::find(m.columns.begin(), m.columns.end(), "mean_sentiment") - m.columns.begin());
    CHECK(m.imputed[c][j]);
    const double expected = oracle::median({m.rows[0][j], m.rows[1][j]});
    CHECK(m.rows[c][j] == doctest::Approx(expected));
    CHECK(std::any_of(m.imputation.begin(), m.imputation.end(),
                      [](const ImputationEntry& e) { return e.column == "mean_sentiment"; }));
    // n_reviews is observed as zero rather than imputed.
    CHECK(m.rows[c][1] == 0.0);
  }

  TEST_CASE("structured aggregates") {
    Fixture f;
    const auto fv = structured_features(f.listings, "B");
    CHECK(fv.n_listings == 3);
    CHECK(*fv.mean_price == doctest::Approx(51.0));
    CHECK_FALSE(fv.mean_star.has_value());
  }

  TEST_CASE("rows without a target are excluded") {
    Fixture f;
    const auto rf = review_features(f.reviews, f.res);
    const auto vecs = build_features(f.listings, rf, {"A", "B"});
    const auto m = assemble_matrix(vecs, {{"A", 1.0}, {"Z", 2.0}});
    CHECK(m.n() == 1);
    CHECK(m.excluded_no_target == std::vector<std::string>{"B"});
    CHECK(m.excluded_no_features == std::vector<std::string>{"Z"});
  }

  TEST_CASE("review features do not depend on the thread count") {
    Fixture f;
    const auto a = review_features(f.reviews, f.res, 1);
    const auto b = review_features(f.reviews, f.res, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].theta == b[i].theta);
      CHECK(a[i].vector == b[i].vector);
      CHECK(a[i].sentiment == b[i].sentiment);
    }
  }

  TEST_CASE("matrix CSV has the data columns and imputation flags") {
    Fixture f;
    const auto rf = review_features(f.reviews, f.res);
    const auto m = assemble_matrix(build_features(f.listings, rf, {"A", "B", "C"}),
                                   {{"A", 1.0}, {"B", -1.0}, {"C", 0.5}});
    std::ostringstream out;
    write_matrix_csv(m, out);
    const std::string header = out.str().substr(0, out.str().find('\n'));
    CHECK(header.starts_with("neighborhood_id,target,n_listings"));
    CHECK(header.find("imputed_mean_sentiment") != std::string::npos);
  }
}

TEST_SUITE("synth") {
  TEST_CASE("generator is deterministic and sized as configured") {
    SynthConfig c;
    c.n_neighborhoods = 40;
    c.seed = 7;
    const auto a = generate_city(c);
    const auto b = generate_city(c);
    CHECK(a.latent.size() == 40);
    CHECK(a.socio_prev.size() == 40);
    CHECK(a.socio_curr.size() == 40);
    REQUIRE(a.reviews.size() == b.reviews.size());
    for (std::size_t i = 0; i < a.reviews.size(); ++i) CHECK(a.reviews[i].text == b.reviews[i].text);
    std::map<std::string, std::size_t> per_hood;
    for (const auto& l : a.listings) per_hood[l.neighborhood_id]++;
    for (const auto& [id, n] : per_hood) CHECK(n >= c.min_listings);
  }

  TEST_CASE("US cities carry race, UK cities do not") {
    SynthConfig c;
    c.n_neighborhoods = 10;
    CHECK(generate_city(c).socio_curr[0].race.has_value());
    c.country = Country::uk;
    CHECK_FALSE(generate_city(c).socio_curr[0].race.has_value());
  }

  TEST_CASE("invalid configuration") {
    SynthConfig c;
    c.n_neighborhoods = 3;
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }

  TEST_CASE("computed score tracks the planted latent score") {
    SynthConfig c;
    c.seed = 3;
    const auto city = generate_city(c);
    const auto t = build_target(build_panel(city.socio_prev, city.socio_curr),
                                TargetSpec::equal_four(), Country::us);
    std::vector<double> s, z;
    for (const auto& r : t.rows) {
      s.push_back(r.score);
      z.push_back(city.latent.at(r.neighborhood_id));
    }
    CHECK(oracle::pearson(s, z) > 0.9);
  }
}

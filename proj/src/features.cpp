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

#include "gentricast/features.hpp"

#include <algorithm>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "gentricast/csv.hpp"
#include "gentricast/error.hpp"
#include "gentricast/stats.hpp"

namespace gentricast {

std::vector<Review> canonical_order(std::vector<Review> reviews) {
  std::sort(reviews.begin(), reviews.end(), [](const Review& a, const Review& b) {
    return std::tie(a.review_id, a.listing_id, a.date, a.text) <
           std::tie(b.review_id, b.listing_id, b.date, b.text);
  });
  return reviews;
}

std::vector<Document> tokenize_all(const std::vector<Review>& reviews) {
  std::vector<Document> out;
  out.reserve(reviews.size());
  for (const auto& r : reviews) out.push_back(preprocess(r.text).tokens);
  return out;
}

std::vector<ReviewFeatures> review_features(const std::vector<Review>& reviews,
                                            const TextResources& res, std::size_t threads) {
  if (!res.dictionary || !res.lexicon) {
    throw ConfigError("review_features: dictionary and lexicon are required");
  }
  std::vector<ReviewFeatures> out(reviews.size());
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Review& r = reviews[i];
      ReviewFeatures& f = out[i];
      const TokenizedReview tok = preprocess(r.text);
      f.review_id = r.review_id;
      f.listing_id = r.listing_id;
      f.length = tok.raw_word_count;
      f.location_pct = location_word_fraction(tok, *res.dictionary);
      f.location_review = f.location_pct >= kLocationReviewThreshold;
      f.sentiment = score_sentiment(r.text, *res.lexicon, res.rules);
      if (res.topics) f.theta = infer_topics(*res.topics, tok.tokens);
      if (res.embeddings) f.vector = infer_vector(*res.embeddings, tok.tokens);
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, reviews.size()));
  if (threads == 1) {
    work(0, reviews.size());
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back(work, reviews.size() * t / threads, reviews.size() * (t + 1) / threads);
  }
  for (auto& th : pool) th.join();
  return out;
}

namespace {

struct MeanAcc {
  double sum = 0.0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    ++n;
  }
  std::optional<double> get() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

}  // namespace

FeatureVector structured_features(const std::vector<Listing>& listings,
                                  const std::string& neighborhood_id) {
  FeatureVector fv;
  fv.neighborhood_id = neighborhood_id;
  MeanAcc price, bedrooms, star, loc_star;
  std::map<std::string, MeanAcc> subs;
  for (const auto& name : known_subratings()) subs[name];
  for (const auto& l : listings) {
    if (l.neighborhood_id != neighborhood_id) continue;
    ++fv.n_listings;
    price.add(l.price);
    bedrooms.add(l.bedrooms);
    if (l.star_rating) star.add(*l.star_rating);
    if (l.location_star_rating) loc_star.add(*l.location_star_rating);
    for (const auto& [name, v] : l.subratings) subs[name].add(v);
  }
  fv.mean_price = price.get();
  fv.mean_bedrooms = bedrooms.get();
  fv.mean_star = star.get();
  fv.mean_location_star = loc_star.get();
  for (const auto& [name, acc] : subs) fv.subratings[name] = acc.get();
  return fv;
}

void unstructured_features(FeatureVector& fv, const std::vector<const ReviewFeatures*>& reviews) {
  fv.n_reviews = reviews.size();
  MeanAcc length, loc, sent, loc_sent;
  std::vector<double> theta, vec;
  for (const auto* r : reviews) {
    length.add(static_cast<double>(r->length));
    loc.add(r->location_pct);
    sent.add(r->sentiment);
    if (r->location_review) loc_sent.add(r->sentiment);
    if (theta.empty()) theta.assign(r->theta.size(), 0.0);
    if (vec.empty()) vec.assign(r->vector.size(), 0.0);
    if (r->theta.size() != theta.size() || r->vector.size() != vec.size()) {
      throw ComputeError("unstructured_features: inconsistent topic or embedding dimension");
    }
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] += r->theta[k];
    for (std::size_t k = 0; k < vec.size(); ++k) vec[k] += r->vector[k];
  }
  fv.mean_review_length = length.get();
  fv.location_word_pct = loc.get();
  fv.mean_sentiment = sent.get();
  fv.location_review_sentiment = loc_sent.get();
  const double n = static_cast<double>(reviews.size());
  for (auto& x : theta) x /= n;
  for (auto& x : vec) x /= n;
  fv.topic_means = std::move(theta);
  fv.embedding_means = std::move(vec);
}

std::vector<FeatureVector> build_features(const std::vector<Listing>& listings,
                                          const std::vector<ReviewFeatures>& reviews,
                                          const std::set<std::string>& neighborhoods) {
  const auto owner = listing_neighborhoods(listings);
  std::map<std::string, std::vector<const ReviewFeatures*>> by_hood;
  for (const auto& r : reviews) {
    auto it = owner.find(r.listing_id);
    if (it != owner.end() && neighborhoods.count(it->second)) by_hood[it->second].push_back(&r);
  }
  std::vector<FeatureVector> out;
  for (const auto& id : neighborhoods) {
    FeatureVector fv = structured_features(listings, id);
    unstructured_features(fv, by_hood[id]);
    out.push_back(std::move(fv));
  }
  return out;
}

std::string_view to_string(FeatureSet s) noexcept {
  switch (s) {
    case FeatureSet::structured: return "structured";
    case FeatureSet::unstructured: return "unstructured";
    case FeatureSet::all: return "all";
  }
  return "?";
}

FeatureSet parse_feature_set(std::string_view s) {
  if (s == "structured") return FeatureSet::structured;
  if (s == "unstructured") return FeatureSet::unstructured;
  if (s == "all") return FeatureSet::all;
  throw ConfigError(
      fmt::format("unknown feature set '{}' (expected structured, unstructured or all)", s));
}

std::vector<std::size_t> DesignMatrix::select(FeatureSet set) const {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const bool structured = j < n_structured;
    if (set == FeatureSet::all || (set == FeatureSet::structured) == structured) idx.push_back(j);
  }
  return idx;
}

DesignMatrix DesignMatrix::subset(FeatureSet set) const {
  const auto idx = select(set);
  DesignMatrix m;
  m.row_ids = row_ids;
  m.target = target;
  m.excluded_no_features = excluded_no_features;
  m.excluded_no_target = excluded_no_target;
  for (std::size_t j : idx) {
    m.columns.push_back(columns[j]);
    if (j < n_structured) ++m.n_structured;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<double> r;
    std::vector<bool> f;
    for (std::size_t j : idx) {
      r.push_back(rows[i][j]);
      f.push_back(imputed[i][j]);
    }
    m.rows.push_back(std::move(r));
    m.imputed.push_back(std::move(f));
  }
  for (const auto& e : imputation) {
    if (std::find(m.columns.begin(), m.columns.end(), e.column) != m.columns.end()) {
      m.imputation.push_back(e);
    }
  }
  return m;
}

std::vector<double> DesignMatrix::column(std::size_t j) const {
  std::vector<double> c;
  c.reserve(rows.size());
  for (const auto& r : rows) c.push_back(r[j]);
  return c;
}

std::size_t structured_column_count(const AssembleOptions& options) {
  return 6 + (options.include_subratings ? known_subratings().size() : 0);
}

DesignMatrix assemble_matrix(const std::vector<FeatureVector>& vectors,
                             const std::map<std::string, double>& targets,
                             const AssembleOptions& options) {
  std::map<std::string, const FeatureVector*> by_id;
  for (const auto& v : vectors) by_id[v.neighborhood_id] = &v;

  DesignMatrix m;
  for (const auto& [id, y] : targets) {
    if (!by_id.count(id)) m.excluded_no_features.push_back(id);
  }
  for (const auto& [id, v] : by_id) {
    if (!targets.count(id)) m.excluded_no_target.push_back(id);
  }

  std::size_t K = 0, D = 0;
  for (const auto& [id, v] : by_id) {
    if (!targets.count(id)) continue;
    K = std::max(K, v->topic_means.size());
    D = std::max(D, v->embedding_means.size());
  }

  m.columns = {"n_listings", "n_reviews", "mean_price", "mean_bedrooms", "mean_star",
               "mean_location_star"};
  if (options.include_subratings) {
    for (const auto& name : known_subratings()) m.columns.push_back("sub_" + name);
  }
  m.n_structured = m.columns.size();
  for (const char* c : {"mean_review_length", "location_word_pct", "mean_sentiment",
                        "location_review_sentiment"}) {
    m.columns.emplace_back(c);
  }
  for (std::size_t k = 0; k < K; ++k) m.columns.push_back(fmt::format("topic_{}", k));
  for (std::size_t d = 0; d < D; ++d) m.columns.push_back(fmt::format("emb_{}", d));

  std::vector<std::vector<std::optional<double>>> raw;
  for (const auto& [id, v] : by_id) {
    auto t = targets.find(id);
    if (t == targets.end()) continue;
    std::vector<std::optional<double>> r{static_cast<double>(v->n_listings),
                                         static_cast<double>(v->n_reviews),
                                         v->mean_price,
                                         v->mean_bedrooms,
                                         v->mean_star,
                                         v->mean_location_star};
    if (options.include_subratings) {
      for (const auto& name : known_subratings()) {
        auto s = v->subratings.find(name);
        r.push_back(s == v->subratings.end() ? std::nullopt : s->second);
      }
    }
    r.insert(r.end(), {v->mean_review_length, v->location_word_pct, v->mean_sentiment,
                       v->location_review_sentiment});
    for (std::size_t k = 0; k < K; ++k) {
      r.push_back(k < v->topic_means.size() ? std::optional<double>(v->topic_means[k])
                                            : std::nullopt);
    }
    for (std::size_t d = 0; d < D; ++d) {
      r.push_back(d < v->embedding_means.size() ? std::optional<double>(v->embedding_means[d])
                                                : std::nullopt);
    }
    raw.push_back(std::move(r));
    m.row_ids.push_back(id);
    m.target.push_back(t->second);
  }

  const std::size_t p = m.columns.size();
  std::vector<double> fill(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> observed;
    std::size_t missing = 0;
    for (const auto& r : raw) {
      if (r[j]) {
        observed.push_back(*r[j]);
      } else {
        ++missing;
      }
    }
    if (!observed.empty()) fill[j] = stats::median(observed);
    if (missing > 0) m.imputation.push_back({m.columns[j], missing, fill[j]});
  }
  for (const auto& r : raw) {
    std::vector<double> row(p);
    std::vector<bool> flags(p);
    for (std::size_t j = 0; j < p; ++j) {
      row[j] = r[j] ? *r[j] : fill[j];
      flags[j] = !r[j];
    }
    m.rows.push_back(std::move(row));
    m.imputed.push_back(std::move(flags));
  }
  return m;
}

void write_matrix_csv(const DesignMatrix& m, std::ostream& out) {
  csv::Writer w(out);
  std::vector<std::size_t> flagged;
  for (std::size_t j = 0; j < m.p(); ++j) {
    for (const auto& e : m.imputation) {
      if (e.column == m.columns[j]) flagged.push_back(j);
    }
  }
  std::vector<std::string> header{"neighborhood_id", "target"};
  header.insert(header.end(), m.columns.begin(), m.columns.end());
  for (std::size_t j : flagged) header.push_back("imputed_" + m.columns[j]);
  w.row(header);
  for (std::size_t i = 0; i < m.n(); ++i) {
    std::vector<std::string> row{m.row_ids[i], fmt::format("{:.17g}", m.target[i])};
    for (double v : m.rows[i]) row.push_back(fmt::format("{:.17g}", v));
    for (std::size_t j : flagged) row.emplace_back(m.imputed[i][j] ? "1" : "0");
    w.row(row);
  }
}

std::vector<FeatureSummary> summarize_features(const DesignMatrix& m) {
  std::vector<FeatureSummary> out;
  if (m.n() == 0) return out;
  for (std::size_t j = 0; j < m.p(); ++j) {
    const auto c = m.column(j);
    out.push_back({m.columns[j], stats::median(c), stats::sample_sd(c)});
  }
  return out;
}

}  // namespace gentricast

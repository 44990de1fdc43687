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
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "gentricast/embeddings.hpp"
#include "gentricast/error.hpp"
#include "gentricast/topics.hpp"

using namespace gentricast;

namespace {

/// Documents drawn from disjoint vocabularies, one group per document.
std::vector<Document> grouped_corpus(std::size_t groups, std::size_t docs, std::size_t words,
                                     std::size_t length, std::uint64_t seed,
                                     std::vector<std::size_t>* labels = nullptr) {
  std::mt19937_64 gen(seed);
  std::vector<Document> out;
  for (std::size_t d = 0; d < docs; ++d) {
    const std::size_t g = d % groups;
    if (labels) labels->push_back(g);
    Document doc;
    for (std::size_t i = 0; i < length; ++i) {
      doc.push_back("g" + std::to_string(g) + "w" + std::to_string(gen() % words));
    }
    out.push_back(std::move(doc));
  }
  return out;
}

double row_sum(const std::vector<double>& v, std::size_t from, std::size_t n) {
  return std::accumulate(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(from + n),
                         0.0);
}

}  // namespace

TEST_SUITE("topics") {
  TEST_CASE("vocabulary honours min_count and sorts terms") {
    const std::vector<Document> docs{{"b", "a", "b"}, {"c", "b", "a"}};
    const auto v = Vocabulary::build(docs, 2);
    CHECK(v.terms() == std::vector<std::string>{"a", "b"});
    CHECK(v.encode({"c", "b", "a"}) == std::vector<std::size_t>{1, 0});
  }

  TEST_CASE("two disjoint vocabularies are separated by a two-topic model") {
    std::vector<std::size_t> labels;
    const auto docs = grouped_corpus(2, 100, 10, 30, 1, &labels);
    LdaParams p;
    p.k = 2;
    p.alpha = 0.1;
    p.iterations = 200;
    p.burn_in = 50;
    p.min_count = 1;
    p.seed = 7;
    const auto m = fit_lda(docs, p);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(std::abs(row_sum(m.phi, k * m.vocab.size(), m.vocab.size()) - 1.0) < 1e-9);
    }
    double mass = 0.0;
    for (const auto& d : docs) {
      const auto theta = infer_topics(m, d);
      CHECK(std::abs(std::accumulate(theta.begin(), theta.end(), 0.0) - 1.0) < 1e-9);
      mass += *std::max_element(theta.begin(), theta.end());
    }
    CHECK(mass / static_cast<double>(docs.size()) >= 0.9);
    const auto w0 = top_words(m, 0, 10);
    const char g = w0.front().first[1];
    for (const auto& [term, weight] : w0) CHECK(term[1] == g);
  }

  TEST_CASE("single topic and out-of-vocabulary documents") {
    const auto docs = grouped_corpus(2, 20, 5, 10, 2);
    LdaParams p;
    p.k = 1;
    p.iterations = 20;
    p.burn_in = 5;
    p.min_count = 1;
    const auto m = fit_lda(docs, p);
    CHECK(infer_topics(m, docs[0]) == std::vector<double>{1.0});
    p.k = 2;
    const auto m2 = fit_lda(docs, p);
    CHECK(infer_topics(m2, {"unseen"}) == std::vector<double>{0.5, 0.5});
    CHECK(infer_topics(m2, {}) == std::vector<double>{0.5, 0.5});
  }

  TEST_CASE("inference is deterministic per document") {
    const auto docs = grouped_corpus(3, 60, 8, 20, 3);
    LdaParams p;
    p.k = 3;
    p.iterations = 50;
    p.burn_in = 10;
    p.min_count = 1;
    p.seed = 11;
    const auto m = fit_lda(docs, p);
    CHECK(infer_topics(m, docs[5]) == infer_topics(m, docs[5]));
    const auto again = fit_lda(docs, p);
    CHECK(m.phi == again.phi);
  }

  TEST_CASE("uniform model has perplexity equal to the vocabulary size") {
    TopicModel m;
    m.k = 1;
    m.alpha = 1.0;
    m.beta = 0.01;
    m.vocab = Vocabulary({"a", "b", "c", "d"});
    m.phi.assign(4, 0.25);
    CHECK(perplexity(m, {{"a", "b", "c", "d", "a", "b"}}) == doctest::Approx(4.0));
  }

  TEST_CASE("true topic count beats a single topic in held-out perplexity") {
    const auto train = grouped_corpus(2, 80, 10, 30, 4);
    const auto test = grouped_corpus(2, 20, 10, 30, 5);
    LdaParams p;
    p.alpha = 0.1;
    p.iterations = 100;
    p.burn_in = 20;
    p.min_count = 1;
    p.k = 2;
    const double two = perplexity(fit_lda(train, p), test);
    p.k = 1;
    const double one = perplexity(fit_lda(train, p), test);
    CHECK(two < one);
  }

  TEST_CASE("select_k with one candidate returns it") {
    const auto docs = grouped_corpus(2, 30, 5, 10, 6);
    LdaParams p;
    p.iterations = 10;
    p.burn_in = 2;
    p.min_count = 1;
    const auto sel = select_k(docs, {5}, p);
    CHECK(sel.best_k == 5);
    CHECK(sel.perplexities.size() == 1);
  }

  TEST_CASE("model persistence round-trips") {
    const auto docs = grouped_corpus(2, 30, 5, 10, 7);
    LdaParams p;
    p.k = 2;
    p.iterations = 20;
    p.burn_in = 5;
    p.min_count = 1;
    const auto m = fit_lda(docs, p);
    std::stringstream ss;
    m.save(ss);
    const auto back = TopicModel::load(ss);
    CHECK(back.vocab.terms() == m.vocab.terms());
    CHECK(back.phi == m.phi);
    CHECK(infer_topics(back, docs[0]) == infer_topics(m, docs[0]));
    std::istringstream bad("not a model");
    CHECK_THROWS_AS(TopicModel::load(bad), IngestError);
  }

  TEST_CASE("invalid parameters") {
    LdaParams p;
    p.k = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = LdaParams{};
    p.burn_in = p.iterations;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS(fit_lda({}, LdaParams{}), ComputeError);
  }
}

TEST_SUITE("embeddings") {
  TEST_CASE("vectors have the configured dimension and are seed-deterministic") {
    const auto docs = grouped_corpus(2, 80, 10, 20, 8);
    EmbeddingParams p;
    p.min_count = 1;
    p.epochs = 5;
    p.seed = 3;
    const auto a = fit_embeddings(docs, p);
    const auto b = fit_embeddings(docs, p);
    CHECK(a.doc_vectors.size() == docs.size() * 25);
    CHECK(a.doc_vectors == b.doc_vectors);
    CHECK(a.word_vectors == b.word_vectors);
    const auto v = infer_vector(a, docs[0]);
    CHECK(v.size() == 25);
    CHECK(v == infer_vector(b, docs[0]));
    CHECK(infer_vector(a, {"unseen"}) == std::vector<float>(25, 0.0f));
  }

  TEST_CASE("documents from the same vocabulary are closer") {
    std::vector<std::size_t> labels;
    const auto docs = grouped_corpus(2, 200, 20, 25, 9, &labels);
    EmbeddingParams p;
    p.min_count = 1;
    p.seed = 5;
    const auto m = fit_embeddings(docs, p);
    double within = 0, across = 0;
    std::size_t nw = 0, na = 0;
    for (std::size_t i = 0; i < 60; ++i) {
      for (std::size_t j = i + 1; j < 60; ++j) {
        const double c = cosine(m.doc_vector(i), m.doc_vector(j));
        if (labels[i] == labels[j]) {
          within += c;
          ++nw;
        } else {
          across += c;
          ++na;
        }
      }
    }
    CHECK(within / static_cast<double>(nw) - across / static_cast<double>(na) >= 0.2);
  }

  TEST_CASE("persistence round-trips") {
    const auto docs = grouped_corpus(2, 30, 5, 10, 10);
    EmbeddingParams p;
    p.min_count = 1;
    p.epochs = 3;
    p.dim = 8;
    const auto m = fit_embeddings(docs, p);
    std::stringstream ss;
    m.save(ss);
    const auto back = EmbeddingModel::load(ss);
    CHECK(back.dim() == 8);
    CHECK(back.doc_vectors == m.doc_vectors);
    CHECK(infer_vector(back, docs[1]) == infer_vector(m, docs[1]));
  }

  TEST_CASE("cosine") {
    const std::vector<double> a{1, 0}, b{0, 1}, z{0, 0};
    CHECK(cosine(a, a) == doctest::Approx(1.0));
    CHECK(cosine(a, b) == doctest::Approx(0.0));
    CHECK(cosine(a, z) == 0.0);
    CHECK_THROWS_AS(cosine(a, std::vector<double>{1, 2, 3}), ComputeError);
  }

  TEST_CASE("parallel mode keeps the contract") {
    const auto docs = grouped_corpus(2, 60, 10, 20, 11);
    EmbeddingParams p;
    p.min_count = 1;
    p.epochs = 3;
    p.parallel = true;
    p.threads = 2;
    const auto m = fit_embeddings(docs, p);
    CHECK(m.doc_vectors.size() == docs.size() * 25);
    for (float v : m.doc_vectors) CHECK(std::isfinite(v));
  }
}

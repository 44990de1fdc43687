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

#include "gentricast/topics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "gentricast/error.hpp"
#include "gentricast/rng.hpp"
#include "gentricast/simd/kernels.hpp"

namespace gentricast {

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end());
  terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
}

Vocabulary Vocabulary::build(const std::vector<Document>& docs, std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto& d : docs) {
    for (const auto& t : d) ++counts[t];
  }
  std::vector<std::string> terms;
  for (const auto& [t, c] : counts) {
    if (c >= min_count) terms.push_back(t);
  }
  return Vocabulary(std::move(terms));
}

std::optional<std::size_t> Vocabulary::id(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Vocabulary::encode(const Document& doc) const {
  std::vector<std::size_t> out;
  out.reserve(doc.size());
  for (const auto& t : doc) {
    if (auto i = id(t)) out.push_back(*i);
  }
  return out;
}

void LdaParams::validate() const {
  if (k < 1) throw ConfigError("lda: k must be >= 1");
  if (!(alpha_value() > 0.0)) throw ConfigError("lda: alpha must be positive");
  if (!(beta > 0.0)) throw ConfigError("lda: beta must be positive");
  if (iterations == 0 || burn_in >= iterations) {
    throw ConfigError("lda: need iterations > burn_in");
  }
  if (infer_iterations == 0 || infer_burn_in >= infer_iterations) {
    throw ConfigError("lda: need infer_iterations > infer_burn_in");
  }
}

namespace {

std::size_t draw(Rng& rng, std::vector<double>& cumulative) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

void normalize(std::span<double> v) {
  const double s = simd::sum(std::span<const double>(v.data(), v.size()));
  for (auto& x : v) x /= s;
}

}  // namespace

TopicModel fit_lda(const std::vector<Document>& docs, const LdaParams& params) {
  params.validate();
  if (docs.empty()) throw ComputeError("lda: empty corpus");
  TopicModel model;
  model.vocab = Vocabulary::build(docs, params.min_count);
  const std::size_t V = model.vocab.size();
  const std::size_t K = params.k;
  if (V == 0) throw ComputeError("lda: empty vocabulary after min-count filtering");
  if (K > V) {
    throw ComputeError(fmt::format("lda: k = {} exceeds vocabulary size {}", K, V));
  }
  model.k = K;
  model.alpha = params.alpha_value();
  model.beta = params.beta;
  model.iterations = params.iterations;
  model.burn_in = params.burn_in;
  model.infer_iterations = params.infer_iterations;
  model.infer_burn_in = params.infer_burn_in;
  model.seed = params.seed;

  std::vector<std::vector<std::size_t>> words;
  words.reserve(docs.size());
  std::size_t total = 0;
  for (const auto& d : docs) {
    words.push_back(model.vocab.encode(d));
    total += words.back().size();
  }
  if (total == 0) throw ComputeError("lda: corpus has no in-vocabulary tokens");

  Rng rng(params.seed);
  std::vector<std::vector<std::uint32_t>> z(words.size());
  std::vector<std::uint32_t> ndk(words.size() * K, 0);
  std::vector<std::uint32_t> nkw(K * V, 0);
  std::vector<std::uint32_t> nk(K, 0);
  for (std::size_t d = 0; d < words.size(); ++d) {
    z[d].resize(words[d].size());
    for (std::size_t i = 0; i < words[d].size(); ++i) {
      const auto t = static_cast<std::uint32_t>(rng.below(K));
      z[d][i] = t;
      ++ndk[d * K + t];
      ++nkw[t * V + words[d][i]];
      ++nk[t];
    }
  }

  const double alpha = model.alpha;
  const double beta = model.beta;
  const double vbeta = static_cast<double>(V) * beta;
  std::vector<double> cumulative(K);
  std::vector<double> phi_sum(K * V, 0.0);
  std::size_t samples = 0;
  for (std::size_t it = 0; it < params.iterations; ++it) {
    for (std::size_t d = 0; d < words.size(); ++d) {
      std::uint32_t* nd = &ndk[d * K];
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const std::size_t w = words[d][i];
        const std::uint32_t old = z[d][i];
        --nd[old];
        --nkw[old * V + w];
        --nk[old];
        double acc = 0.0;
        for (std::size_t t = 0; t < K; ++t) {
          acc += (nd[t] + alpha) * (nkw[t * V + w] + beta) / (nk[t] + vbeta);
          cumulative[t] = acc;
        }
        const auto t = static_cast<std::uint32_t>(draw(rng, cumulative));
        z[d][i] = t;
        ++nd[t];
        ++nkw[t * V + w];
        ++nk[t];
      }
    }
    if (it >= params.burn_in) {
      for (std::size_t t = 0; t < K; ++t) {
        const double denom = nk[t] + vbeta;
        for (std::size_t w = 0; w < V; ++w) phi_sum[t * V + w] += (nkw[t * V + w] + beta) / denom;
      }
      ++samples;
    }
  }
  model.phi = std::move(phi_sum);
  for (std::size_t t = 0; t < K; ++t) normalize(std::span<double>(&model.phi[t * V], V));
  return model;
}

namespace {

std::vector<double> infer_ids(const TopicModel& model, const std::vector<std::size_t>& ids,
                              std::uint64_t seed) {
  const std::size_t K = model.k;
  std::vector<double> theta(K, 1.0 / static_cast<double>(K));
  if (ids.empty() || K == 1) return theta;
  Rng rng(seed);
  std::vector<std::uint32_t> z(ids.size());
  std::vector<std::uint32_t> nd(K, 0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    z[i] = static_cast<std::uint32_t>(rng.below(K));
    ++nd[z[i]];
  }
  std::vector<double> cumulative(K);
  std::vector<double> acc_theta(K, 0.0);
  const double denom = static_cast<double>(ids.size()) + static_cast<double>(K) * model.alpha;
  for (std::size_t it = 0; it < model.infer_iterations; ++it) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      --nd[z[i]];
      double acc = 0.0;
      for (std::size_t t = 0; t < K; ++t) {
        acc += (nd[t] + model.alpha) * model.phi_at(t, ids[i]);
        cumulative[t] = acc;
      }
      z[i] = static_cast<std::uint32_t>(draw(rng, cumulative));
      ++nd[z[i]];
    }
    if (it >= model.infer_burn_in) {
      for (std::size_t t = 0; t < K; ++t) acc_theta[t] += (nd[t] + model.alpha) / denom;
    }
  }
  normalize(acc_theta);
  return acc_theta;
}

std::uint64_t doc_seed(const TopicModel& model, const Document& doc) {
  return derive_seed(model.seed, hash_tokens(doc));
}

}  // namespace

std::vector<double> infer_topics(const TopicModel& model, const Document& doc) {
  if (model.k == 0) throw ComputeError("infer_topics: model is not fitted");
  return infer_ids(model, model.vocab.encode(doc), doc_seed(model, doc));
}

double perplexity(const TopicModel& model, const std::vector<Document>& held_out) {
  if (held_out.empty()) throw ComputeError("perplexity: empty held-out set");
  double log_lik = 0.0;
  std::size_t n = 0;
  for (const auto& doc : held_out) {
    const auto ids = model.vocab.encode(doc);
    std::vector<std::size_t> fit, score;
    for (std::size_t i = 0; i < ids.size(); ++i) (i % 2 == 0 ? fit : score).push_back(ids[i]);
    if (score.empty()) continue;
    const auto theta = infer_ids(model, fit, doc_seed(model, doc));
    for (std::size_t w : score) {
      double p = 0.0;
      for (std::size_t t = 0; t < model.k; ++t) p += theta[t] * model.phi_at(t, w);
      log_lik += std::log(p);
      ++n;
    }
  }
  if (n == 0) throw ComputeError("perplexity: no scorable in-vocabulary tokens");
  return std::exp(-log_lik / static_cast<double>(n));
}

KSelection select_k(const std::vector<Document>& docs, const std::vector<std::size_t>& candidates,
                    const LdaParams& base, double holdout_fraction) {
  if (candidates.empty()) throw ConfigError("select_k: no candidate k");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw ConfigError("select_k: holdout fraction must lie in (0, 1)");
  }
  if (docs.size() < 2) throw ComputeError("select_k: need at least two documents");
  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(base.seed, 0x5e1ec7));
  std::shuffle(order.begin(), order.end(), rng.engine());
  auto n_test = static_cast<std::size_t>(std::round(holdout_fraction * docs.size()));
  n_test = std::clamp<std::size_t>(n_test, 1, docs.size() - 1);
  std::vector<Document> train, test;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_test ? test : train).push_back(docs[order[i]]);
  }
  KSelection out;
  double best = 0.0;
  for (std::size_t k : candidates) {
    LdaParams p = base;
    p.k = k;
    p.alpha = base.alpha;
    p.seed = derive_seed(base.seed, k);
    const double perp = perplexity(fit_lda(train, p), test);
    out.perplexities.emplace_back(k, perp);
    if (out.best_k == 0 || perp < best || (perp == best && k < out.best_k)) {
      best = perp;
      out.best_k = k;
    }
  }
  return out;
}

std::vector<std::pair<std::string, double>> top_words(const TopicModel& model, std::size_t topic,
                                                      std::size_t n) {
  if (topic >= model.k) {
    throw ComputeError(fmt::format("top_words: topic {} out of range (k = {})", topic, model.k));
  }
  const std::size_t V = model.vocab.size();
  std::vector<std::size_t> ids(V);
  std::iota(ids.begin(), ids.end(), 0);
  // vocabulary ids are in lexicographic order, so a stable sort breaks ties by term
  std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    return model.phi_at(topic, a) > model.phi_at(topic, b);
  });
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < std::min(n, V); ++i) {
    out.emplace_back(model.vocab.term(ids[i]), model.phi_at(topic, ids[i]));
  }
  return out;
}

std::vector<std::size_t> align_topics(const TopicModel& a, const TopicModel& b) {
  if (a.k != b.k) throw ComputeError("align_topics: models differ in k");
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  for (std::size_t i = 0; i < a.vocab.size(); ++i) {
    if (auto j = b.vocab.id(a.vocab.term(i))) shared.emplace_back(i, *j);
  }
  const std::size_t K = a.k;
  std::vector<std::tuple<double, std::size_t, std::size_t>> sims;
  for (std::size_t s = 0; s < K; ++s) {
    for (std::size_t t = 0; t < K; ++t) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (auto [i, j] : shared) {
        dot += a.phi_at(s, i) * b.phi_at(t, j);
        na += a.phi_at(s, i) * a.phi_at(s, i);
        nb += b.phi_at(t, j) * b.phi_at(t, j);
      }
      const double cos = (na > 0 && nb > 0) ? dot / std::sqrt(na * nb) : 0.0;
      sims.emplace_back(-cos, s, t);
    }
  }
  std::sort(sims.begin(), sims.end());
  std::vector<std::size_t> out(K, K);
  std::vector<bool> used(K, false);
  for (auto [neg, s, t] : sims) {
    if (out[s] != K || used[t]) continue;
    out[s] = t;
    used[t] = true;
  }
  return out;
}

void TopicModel::save(std::ostream& out) const {
  out << "gentricast-lda v1\n";
  out << fmt::format("k {}\nalpha {:.17g}\nbeta {:.17g}\niterations {}\nburn_in {}\n", k, alpha,
                     beta, iterations, burn_in);
  out << fmt::format("infer_iterations {}\ninfer_burn_in {}\nseed {}\nvocab {}\n",
                     infer_iterations, infer_burn_in, seed, vocab.size());
  for (const auto& t : vocab.terms()) out << t << '\n';
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t w = 0; w < vocab.size(); ++w) {
      out << fmt::format("{:.17g}", phi_at(t, w)) << (w + 1 == vocab.size() ? '\n' : ' ');
    }
  }
}

void TopicModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ComputeError("cannot write topic model '" + path.string() + "'");
  save(out);
}

TopicModel TopicModel::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "gentricast-lda v1") {
    throw IngestError("topic model: bad header");
  }
  TopicModel m;
  auto field = [&](const char* name, auto& value) {
    std::string key;
    if (!(in >> key >> value) || key != name) {
      throw IngestError(std::string("topic model: expected field ") + name);
    }
  };
  std::size_t v = 0;
  field("k", m.k);
  field("alpha", m.alpha);
  field("beta", m.beta);
  field("iterations", m.iterations);
  field("burn_in", m.burn_in);
  field("infer_iterations", m.infer_iterations);
  field("infer_burn_in", m.infer_burn_in);
  field("seed", m.seed);
  field("vocab", v);
  std::vector<std::string> terms(v);
  for (auto& t : terms) {
    if (!(in >> t)) throw IngestError("topic model: truncated vocabulary");
  }
  m.vocab = Vocabulary(std::move(terms));
  if (m.vocab.size() != v) throw IngestError("topic model: duplicate vocabulary terms");
  m.phi.resize(m.k * v);
  for (auto& x : m.phi) {
    if (!(in >> x)) throw IngestError("topic model: truncated phi");
  }
  return m;
}

TopicModel TopicModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open topic model '" + path.string() + "'");
  return load(in);
}

}  // namespace gentricast

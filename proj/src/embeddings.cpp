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

#include "gentricast/embeddings.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "gentricast/error.hpp"
#include "gentricast/rng.hpp"
#include "gentricast/simd/kernels.hpp"

namespace gentricast {

void EmbeddingParams::validate() const {
  if (dim < 1) throw ConfigError("embeddings: dim must be >= 1");
  if (epochs < 1) throw ConfigError("embeddings: epochs must be >= 1");
  if (!(lr_start > 0.0) || !(lr_end >= 0.0) || lr_end > lr_start) {
    throw ConfigError("embeddings: need lr_start > 0 and 0 <= lr_end <= lr_start");
  }
  if (infer_epochs < 1) throw ConfigError("embeddings: infer_epochs must be >= 1");
}

namespace {

class NoiseTable {
 public:
  explicit NoiseTable(const std::vector<std::uint64_t>& counts) : cumulative_(counts.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      acc += std::pow(static_cast<double>(counts[i]), 0.75);
      cumulative_[i] = acc;
    }
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Sequential access to the output vectors, through the SIMD kernels.
struct DirectAccess {
  float dot(const float* a, const float* b, std::size_t n) const {
    return simd::dot(std::span<const float>(a, n), std::span<const float>(b, n));
  }
  void axpy(float g, const float* x, float* y, std::size_t n) const {
    simd::axpy(g, std::span<const float>(x, n), std::span<float>(y, n));
  }
};

// Relaxed atomic access for the lock-free parallel mode. `b` and `y` are
// the shared output vectors.
struct SharedAccess {
  float dot(const float* a, const float* b, std::size_t n) const {
    float s = 0.0f;
    for (std::size_t i = 0; i < n; ++i) {
      s += a[i] * std::atomic_ref<float>(const_cast<float&>(b[i])).load(std::memory_order_relaxed);
    }
    return s;
  }
  void axpy(float g, const float* x, float* y, std::size_t n) const {
    for (std::size_t i = 0; i < n; ++i) {
      std::atomic_ref<float> r(y[i]);
      r.store(r.load(std::memory_order_relaxed) + g * x[i], std::memory_order_relaxed);
    }
  }
};

template <class Access>
void train_document(float* doc, const std::vector<std::size_t>& ids, float* out_vectors,
                    bool update_out, std::size_t dim, std::size_t negative,
                    const NoiseTable& noise, Rng& rng, double lr, std::vector<float>& grad,
                    const Access& access) {
  for (std::size_t w : ids) {
    std::fill(grad.begin(), grad.end(), 0.0f);
    for (std::size_t s = 0; s <= negative; ++s) {
      std::size_t target = w;
      float label = 1.0f;
      if (s > 0) {
        target = noise.draw(rng);
        if (target == w) continue;
        label = 0.0f;
      }
      float* out = out_vectors + target * dim;
      const float f = access.dot(doc, out, dim);
      const auto g = static_cast<float>((label - sigmoid(f)) * lr);
      simd::axpy(g, std::span<const float>(out, dim), std::span<float>(grad));
      if (update_out) access.axpy(g, doc, out, dim);
    }
    simd::axpy(1.0f, std::span<const float>(grad), std::span<float>(doc, dim));
  }
}

double learning_rate(const EmbeddingParams& p, double progress) {
  return p.lr_start - (p.lr_start - p.lr_end) * std::clamp(progress, 0.0, 1.0);
}

void init_vector(float* v, std::size_t dim, Rng& rng) {
  const double half = 0.5 / static_cast<double>(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = static_cast<float>((rng.uniform() * 2.0 - 1.0) * half);
}

}  // namespace

EmbeddingModel fit_embeddings(const std::vector<Document>& docs, const EmbeddingParams& params) {
  params.validate();
  if (docs.empty()) throw ComputeError("embeddings: empty corpus");
  EmbeddingModel model;
  model.params = params;
  model.vocab = Vocabulary::build(docs, params.min_count);
  const std::size_t V = model.vocab.size();
  if (V == 0) throw ComputeError("embeddings: empty vocabulary after min-count filtering");
  const std::size_t D = params.dim;

  std::vector<std::vector<std::size_t>> ids;
  ids.reserve(docs.size());
  model.counts.assign(V, 0);
  std::size_t total_words = 0;
  for (const auto& d : docs) {
    ids.push_back(model.vocab.encode(d));
    for (std::size_t w : ids.back()) ++model.counts[w];
    total_words += ids.back().size();
  }
  if (total_words == 0) throw ComputeError("embeddings: corpus has no in-vocabulary tokens");

  model.n_docs = docs.size();
  model.word_vectors.assign(V * D, 0.0f);
  model.doc_vectors.assign(docs.size() * D, 0.0f);
  Rng init(derive_seed(params.seed, 1));
  for (std::size_t i = 0; i < docs.size(); ++i) init_vector(&model.doc_vectors[i * D], D, init);

  const NoiseTable noise(model.counts);
  const double planned = static_cast<double>(total_words) * static_cast<double>(params.epochs);

  if (!params.parallel) {
    Rng rng(derive_seed(params.seed, 2));
    std::vector<float> grad(D);
    std::size_t done = 0;
    for (std::size_t e = 0; e < params.epochs; ++e) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const double lr = learning_rate(params, static_cast<double>(done) / planned);
        train_document(&model.doc_vectors[i * D], ids[i], model.word_vectors.data(), true, D,
                       params.negative, noise, rng, lr, grad, DirectAccess{});
        done += ids[i].size();
      }
    }
    return model;
  }

  std::size_t n_threads = params.threads ? params.threads : std::thread::hardware_concurrency();
  n_threads = std::clamp<std::size_t>(n_threads, 1, ids.size());
  std::atomic<std::size_t> done{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      Rng rng(derive_seed(params.seed, 100 + t));
      std::vector<float> grad(D);
      const std::size_t lo = ids.size() * t / n_threads;
      const std::size_t hi = ids.size() * (t + 1) / n_threads;
      for (std::size_t e = 0; e < params.epochs; ++e) {
        for (std::size_t i = lo; i < hi; ++i) {
          const double lr = learning_rate(params, static_cast<double>(done.load()) / planned);
          train_document(&model.doc_vectors[i * D], ids[i], model.word_vectors.data(), true, D,
                         params.negative, noise, rng, lr, grad, SharedAccess{});
          done += ids[i].size();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  return model;
}

std::vector<float> infer_vector(const EmbeddingModel& model, const Document& doc,
                                std::size_t epochs) {
  const std::size_t D = model.dim();
  std::vector<float> v(D, 0.0f);
  const auto ids = model.vocab.encode(doc);
  if (ids.empty()) return v;
  if (epochs == 0) epochs = model.params.infer_epochs;
  Rng rng(derive_seed(model.params.seed, hash_tokens(doc)));
  init_vector(v.data(), D, rng);
  const NoiseTable noise(model.counts);
  std::vector<float> grad(D);
  for (std::size_t e = 0; e < epochs; ++e) {
    const double lr = learning_rate(model.params, static_cast<double>(e) / static_cast<double>(epochs));
    train_document(v.data(), ids, const_cast<float*>(model.word_vectors.data()), false, D,
                   model.params.negative, noise, rng, lr, grad, DirectAccess{});
  }
  return v;
}

double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) throw ComputeError("cosine: length mismatch");
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += static_cast<double>(u[i]) * v[i];
    uu += static_cast<double>(u[i]) * u[i];
    vv += static_cast<double>(v[i]) * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::clamp(uv / std::sqrt(uu * vv), -1.0, 1.0);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ComputeError("cosine: length mismatch");
  const double uu = simd::dot(u, u);
  const double vv = simd::dot(v, v);
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::clamp(simd::dot(u, v) / std::sqrt(uu * vv), -1.0, 1.0);
}

void EmbeddingModel::save(std::ostream& out) const {
  const auto& p = params;
  out << "gentricast-pvdbow v1\n";
  out << fmt::format("dim {}\nepochs {}\nnegative {}\nlr_start {:.17g}\nlr_end {:.17g}\n", p.dim,
                     p.epochs, p.negative, p.lr_start, p.lr_end);
  out << fmt::format("min_count {}\ninfer_epochs {}\nseed {}\nmode {}\n", p.min_count,
                     p.infer_epochs, p.seed, p.parallel ? "parallel" : "sequential");
  out << fmt::format("vocab {}\n", vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out << vocab.term(i) << ' ' << counts[i] << '\n';
  }
  auto rows = [&](const std::vector<float>& m, std::size_t n) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < p.dim; ++c) {
        out << fmt::format("{:.9g}", m[r * p.dim + c]) << (c + 1 == p.dim ? '\n' : ' ');
      }
    }
  };
  rows(word_vectors, vocab.size());
  out << fmt::format("docs {}\n", n_docs);
  rows(doc_vectors, n_docs);
}

void EmbeddingModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ComputeError("cannot write embedding model '" + path.string() + "'");
  save(out);
}

EmbeddingModel EmbeddingModel::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "gentricast-pvdbow v1") {
    throw IngestError("embedding model: bad header");
  }
  EmbeddingModel m;
  auto field = [&](const char* name, auto& value) {
    std::string key;
    if (!(in >> key >> value) || key != name) {
      throw IngestError(std::string("embedding model: expected field ") + name);
    }
  };
  std::string mode;
  std::size_t v = 0;
  field("dim", m.params.dim);
  field("epochs", m.params.epochs);
  field("negative", m.params.negative);
  field("lr_start", m.params.lr_start);
  field("lr_end", m.params.lr_end);
  field("min_count", m.params.min_count);
  field("infer_epochs", m.params.infer_epochs);
  field("seed", m.params.seed);
  field("mode", mode);
  m.params.parallel = mode == "parallel";
  field("vocab", v);
  std::vector<std::string> terms(v);
  std::map<std::string, std::uint64_t> counts;
  for (auto& t : terms) {
    std::uint64_t c = 0;
    if (!(in >> t >> c)) throw IngestError("embedding model: truncated vocabulary");
    counts[t] = c;
  }
  m.vocab = Vocabulary(terms);
  if (m.vocab.size() != v) throw IngestError("embedding model: duplicate vocabulary terms");
  for (const auto& t : m.vocab.terms()) m.counts.push_back(counts[t]);
  auto rows = [&](std::vector<float>& out, std::size_t n) {
    out.resize(n * m.params.dim);
    for (auto& x : out) {
      if (!(in >> x)) throw IngestError("embedding model: truncated vectors");
    }
  };
  rows(m.word_vectors, v);
  field("docs", m.n_docs);
  rows(m.doc_vectors, m.n_docs);
  return m;
}

EmbeddingModel EmbeddingModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open embedding model '" + path.string() + "'");
  return load(in);
}

}  // namespace gentricast

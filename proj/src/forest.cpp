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

#include "gentricast/forest.hpp"

#include <algorithm>
#include <numeric>

#include "gentricast/error.hpp"
#include "gentricast/rng.hpp"

namespace gentricast {

std::size_t ForestParams::mtry_for(std::size_t p) const {
  if (mtry) return std::clamp<std::size_t>(*mtry, 1, std::max<std::size_t>(p, 1));
  return std::max<std::size_t>(1, p / 3);
}

void ForestParams::validate() const {
  if (n_trees == 0) throw ConfigError("forest: n_trees must be >= 1");
  if (min_samples_leaf == 0) throw ConfigError("forest: min_samples_leaf must be >= 1");
  if (mtry && *mtry == 0) throw ConfigError("forest: mtry must be >= 1");
  if (max_depth && *max_depth == 0) throw ConfigError("forest: max_depth must be >= 1");
}

double RegressionTree::predict(std::span<const double> x) const {
  std::uint32_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& n = nodes[i];
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[i].value;
}

double RandomForest::predict(std::span<const double> x) const {
  if (x.size() != n_features) throw ComputeError("forest: feature count mismatch");
  double s = 0.0;
  for (const auto& t : trees) s += t.predict(x);
  return s / static_cast<double>(trees.size());
}

std::vector<double> RandomForest::predict(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(predict(std::span<const double>(row)));
  return out;
}

namespace {

struct Moments {
  double w = 0.0;
  double s = 0.0;
  double q = 0.0;

  void add(double weight, double y) {
    w += weight;
    s += weight * y;
    q += weight * y * y;
  }
  double sse() const { return w > 0.0 ? std::max(0.0, q - s * s / w) : 0.0; }
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& cols, std::span<const double> y,
              const std::vector<double>& weight, const ForestParams& params, std::size_t mtry,
              std::uint64_t seed)
      : cols_(cols), y_(y), w_(weight), params_(params), mtry_(mtry), rng_(seed),
        credit_(cols.size(), 0.0), order_(cols.size()) {
    std::iota(order_.begin(), order_.end(), 0);
  }

  RegressionTree build(std::vector<std::uint32_t> samples) {
    grow(samples, 0);
    return std::move(tree_);
  }

  const std::vector<double>& credit() const { return credit_; }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double proxy = 0.0;
    std::size_t n_left = 0;
  };

  std::uint32_t grow(std::vector<std::uint32_t>& samples, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    Moments node;
    double lo = y_[samples.front()], hi = lo;
    for (auto i : samples) {
      node.add(w_[i], y_[i]);
      lo = std::min(lo, y_[i]);
      hi = std::max(hi, y_[i]);
    }
    tree_.nodes[id].value = node.s / node.w;
    const bool depth_ok = !params_.max_depth || depth < *params_.max_depth;
    if (lo == hi || !depth_ok || samples.size() < 2 * params_.min_samples_leaf) return id;

    const Split best = find_split(samples, node);
    if (best.feature < 0) return id;

    const auto& col = cols_[static_cast<std::size_t>(best.feature)];
    std::vector<std::uint32_t> left, right;
    Moments ml, mr;
    for (auto i : samples) {
      if (col[i] <= best.threshold) {
        left.push_back(i);
        ml.add(w_[i], y_[i]);
      } else {
        right.push_back(i);
        mr.add(w_[i], y_[i]);
      }
    }
    credit_[static_cast<std::size_t>(best.feature)] +=
        std::max(0.0, node.sse() - ml.sse() - mr.sse());
    samples.clear();
    samples.shrink_to_fit();
    const auto l = grow(left, depth + 1);
    const auto r = grow(right, depth + 1);
    auto& n = tree_.nodes[id];
    n.feature = best.feature;
    n.threshold = best.threshold;
    n.left = l;
    n.right = r;
    return id;
  }

  Split find_split(const std::vector<std::uint32_t>& samples, const Moments& node) {
    std::shuffle(order_.begin(), order_.end(), rng_.engine());
    Split best;
    std::size_t visited = 0;
    const std::size_t n = samples.size();
    const std::size_t min_leaf = params_.min_samples_leaf;
    std::vector<std::uint32_t> sorted(samples);
    for (std::size_t f : order_) {
      if (visited == mtry_) break;
      const auto& col = cols_[f];
      std::sort(sorted.begin(), sorted.end(), [&](std::uint32_t a, std::uint32_t b) {
        return col[a] < col[b] || (col[a] == col[b] && a < b);
      });
      if (col[sorted.front()] == col[sorted.back()]) continue;
      ++visited;
      double wl = 0.0, sl = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const auto i = sorted[k];
        wl += w_[i];
        sl += w_[i] * y_[i];
        const double xa = col[i];
        const double xb = col[sorted[k + 1]];
        if (xa == xb) continue;
        if (k + 1 < min_leaf || n - k - 1 < min_leaf) continue;
        const double wr = node.w - wl;
        const double sr = node.s - sl;
        const double proxy = sl * sl / wl + sr * sr / wr;
        if (best.feature < 0 || proxy > best.proxy) {
          double t = 0.5 * (xa + xb);
          if (t >= xb) t = xa;
          best = {static_cast<int>(f), t, proxy, k + 1};
        }
      }
    }
    return best;
  }

  const std::vector<std::vector<double>>& cols_;
  std::span<const double> y_;
  const std::vector<double>& w_;
  const ForestParams& params_;
  std::size_t mtry_;
  Rng rng_;
  RegressionTree tree_;
  std::vector<double> credit_;
  std::vector<std::size_t> order_;
};

}  // namespace

RandomForest rf_fit(const Matrix& x, std::span<const double> y, const ForestParams& params) {
  params.validate();
  if (x.empty() || y.empty()) throw ComputeError("forest: empty data");
  if (x.size() != y.size()) throw ComputeError("forest: rows of X differ from length of y");
  const std::size_t n = x.size();
  const std::size_t p = x.front().size();
  if (p == 0) throw ComputeError("forest: no features");
  std::vector<std::vector<double>> cols(p, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != p) throw ComputeError("forest: ragged design matrix");
    for (std::size_t j = 0; j < p; ++j) cols[j][i] = x[i][j];
  }

  RandomForest forest;
  forest.params = params;
  forest.n_features = p;
  const std::size_t mtry = params.mtry_for(p);
  std::vector<double> importance(p, 0.0);
  std::size_t contributing = 0;
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    const std::uint64_t tree_seed = derive_seed(params.seed, t);
    std::vector<double> weight(n, params.bootstrap ? 0.0 : 1.0);
    if (params.bootstrap) {
      Rng draw(derive_seed(tree_seed, 0xb007));
      for (std::size_t k = 0; k < n; ++k) weight[draw.below(n)] += 1.0;
    }
    std::vector<std::uint32_t> samples;
    for (std::size_t i = 0; i < n; ++i) {
      if (weight[i] > 0.0) samples.push_back(static_cast<std::uint32_t>(i));
    }
    TreeBuilder builder(cols, y, weight, params, mtry, tree_seed);
    forest.trees.push_back(builder.build(std::move(samples)));
    const auto& credit = builder.credit();
    const double total = std::accumulate(credit.begin(), credit.end(), 0.0);
    if (total > 0.0) {
      for (std::size_t j = 0; j < p; ++j) importance[j] += credit[j] / total;
      ++contributing;
    }
  }
  if (contributing == 0) {
    forest.importance.assign(p, 100.0 / static_cast<double>(p));
  } else {
    const double total = std::accumulate(importance.begin(), importance.end(), 0.0);
    forest.importance.resize(p);
    for (std::size_t j = 0; j < p; ++j) forest.importance[j] = 100.0 * importance[j] / total;
  }
  return forest;
}

std::vector<double> mdi_importance(const RandomForest& forest) { return forest.importance; }

}  // namespace gentricast

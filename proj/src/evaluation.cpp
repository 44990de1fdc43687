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

#include "gentricast/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "gentricast/error.hpp"
#include "gentricast/rng.hpp"
#include "gentricast/scoring.hpp"
#include "gentricast/stats.hpp"

namespace gentricast {

void EvaluationProtocol::validate() const {
  if (n_sims == 0) throw ConfigError("evaluation: n_sims must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("evaluation: train_fraction must lie in (0, 1)");
  }
  forest.validate();
}

const SetEvaluation& EvaluationReport::get(FeatureSet s) const {
  for (const auto& e : sets) {
    if (e.set == s) return e;
  }
  throw ComputeError("evaluation report has no entry for feature set");
}

namespace {

constexpr FeatureSet kSets[] = {FeatureSet::structured, FeatureSet::unstructured, FeatureSet::all};

Matrix take(const Matrix& rows, const std::vector<std::size_t>& idx,
            const std::vector<std::size_t>& cols) {
  Matrix out;
  out.reserve(idx.size());
  for (std::size_t i : idx) {
    std::vector<double> r;
    r.reserve(cols.size());
    for (std::size_t j : cols) r.push_back(rows[i][j]);
    out.push_back(std::move(r));
  }
  return out;
}

struct SimResult {
  double baseline = 0.0;
  double rmse[3] = {0.0, 0.0, 0.0};
  std::vector<double> mdi;
};

}  // namespace

EvaluationReport evaluate(const DesignMatrix& m, const EvaluationProtocol& protocol) {
  protocol.validate();
  const std::size_t n = m.n();
  if (n < 4) throw ComputeError("evaluation: need at least 4 rows");
  auto n_train = static_cast<std::size_t>(std::llround(protocol.train_fraction * n));
  if (n_train < 2 || n - n_train < 2) {
    throw ComputeError("evaluation: split leaves fewer than 2 rows on a side");
  }

  EvaluationReport report;
  report.master_seed = protocol.master_seed;
  report.n_sims = protocol.n_sims;
  report.n_rows = n;
  report.n_train = n_train;
  report.baseline_in_sample = baseline_rmse(m.target);

  std::vector<std::vector<std::size_t>> cols;
  std::vector<std::size_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  for (FeatureSet s : kSets) {
    cols.push_back(m.select(s));
    SetEvaluation e;
    e.set = s;
    e.n_columns = cols.back().size();
    if (e.n_columns == 0) throw ComputeError("evaluation: empty feature set");
    const Matrix x = take(m.rows, all_rows, cols.back());
    const OlsModel ols = ols_fit(x, m.target);
    e.ols_rank_deficient = ols.rank_deficient;
    e.ols_in_sample_rmse = stats::rmse(ols_predict(ols, x), m.target);
    report.sets.push_back(std::move(e));
  }

  std::vector<SimResult> sims(protocol.n_sims);
  auto run = [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(protocol.master_seed, i);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng.engine());
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<long>(n_train));
    std::vector<std::size_t> test(order.begin() + static_cast<long>(n_train), order.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    std::vector<double> y_train, y_test;
    for (std::size_t r : train) y_train.push_back(m.target[r]);
    for (std::size_t r : test) y_test.push_back(m.target[r]);
    SimResult& out = sims[i];
    out.baseline = baseline_rmse(y_test);
    for (std::size_t s = 0; s < 3; ++s) {
      ForestParams fp = protocol.forest;
      fp.seed = derive_seed(seed, s + 1);
      const RandomForest rf = rf_fit(take(m.rows, train, cols[s]), y_train, fp);
      out.rmse[s] = stats::rmse(rf.predict(take(m.rows, test, cols[s])), y_test);
      if (kSets[s] == FeatureSet::all) out.mdi = mdi_importance(rf);
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(protocol.threads, 1, protocol.n_sims);
  if (threads == 1) {
    for (std::size_t i = 0; i < protocol.n_sims; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < protocol.n_sims; i = next++) {
          try {
            run(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<double> baselines;
  std::vector<double> mdi(cols[2].size(), 0.0);
  for (const auto& s : sims) {
    baselines.push_back(s.baseline);
    for (std::size_t j = 0; j < mdi.size(); ++j) mdi[j] += s.mdi[j];
  }
  report.baseline_oos_mean = stats::mean(baselines);
  report.baseline_oos_sd = stats::sample_sd(baselines);
  for (std::size_t s = 0; s < 3; ++s) {
    auto& e = report.sets[s];
    for (const auto& sim : sims) e.rf_oos_by_sim.push_back(sim.rmse[s]);
    e.rf_oos_mean = stats::mean(e.rf_oos_by_sim);
    e.rf_oos_sd = stats::sample_sd(e.rf_oos_by_sim);
  }
  const double total = std::accumulate(mdi.begin(), mdi.end(), 0.0);
  for (std::size_t j = 0; j < mdi.size(); ++j) {
    report.mdi_all.emplace_back(m.columns[cols[2][j]], 100.0 * mdi[j] / total);
  }
  return report;
}

QuartileContrast quartile_contrast(const std::map<std::string, double>& scores,
                                   const std::map<std::string, std::vector<double>>& values) {
  if (scores.size() < 4) throw ComputeError("quartile_contrast: need at least 4 neighborhoods");
  std::vector<double> s;
  for (const auto& [id, v] : scores) s.push_back(v);
  const auto pct = percentile_rank(s);
  std::vector<double> upper, lower;
  QuartileContrast out;
  std::size_t i = 0;
  for (const auto& [id, v] : scores) {
    const double p = pct[i++];
    auto it = values.find(id);
    const bool is_upper = p >= 75.0;
    const bool is_lower = p <= 25.0;
    if (is_upper) ++out.neighborhoods_upper;
    if (is_lower) ++out.neighborhoods_lower;
    if (it == values.end()) continue;
    if (is_upper) upper.insert(upper.end(), it->second.begin(), it->second.end());
    if (is_lower) lower.insert(lower.end(), it->second.begin(), it->second.end());
  }
  if (upper.size() < 2 || lower.size() < 2) {
    throw ComputeError("quartile_contrast: a quartile has fewer than 2 observations");
  }
  const auto t = stats::welch_t_test(upper, lower);
  out.upper_mean = t.mean_a;
  out.lower_mean = t.mean_b;
  out.t = t.t;
  out.p_value = t.p_value;
  out.n_upper = upper.size();
  out.n_lower = lower.size();
  return out;
}

}  // namespace gentricast

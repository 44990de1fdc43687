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

#include <cmath>
#include <numeric>
#include <random>

#include "gentricast/error.hpp"
#include "gentricast/evaluation.hpp"
#include "gentricast/forest.hpp"
#include "gentricast/ols.hpp"
#include "gentricast/stats.hpp"
#include "oracles/oracles.hpp"

using namespace gentricast;

namespace {

Matrix random_matrix(std::mt19937_64& gen, std::size_t n, std::size_t p) {
  std::normal_distribution<double> nd;
  Matrix x(n, std::vector<double>(p));
  for (auto& r : x) {
    for (auto& v : r) v = nd(gen);
  }
  return x;
}

DesignMatrix design(std::mt19937_64& gen, std::size_t n, std::size_t ps, std::size_t pu) {
  std::normal_distribution<double> nd;
  DesignMatrix m;
  for (std::size_t j = 0; j < ps; ++j) m.columns.push_back("s" + std::to_string(j));
  for (std::size_t j = 0; j < pu; ++j) m.columns.push_back("u" + std::to_string(j));
  m.n_structured = ps;
  m.rows = random_matrix(gen, n, ps + pu);
  for (std::size_t i = 0; i < n; ++i) {
    m.row_ids.push_back("N" + std::to_string(i));
    m.target.push_back(2.0 * m.rows[i][0] - m.rows[i][ps] + nd(gen));
    m.imputed.emplace_back(ps + pu, false);
  }
  return m;
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("pearson and Welch match direct formulas") {
    std::mt19937_64 gen(1);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 3 + gen() % 50;
      std::vector<double> x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = nd(gen);
        y[i] = 0.5 * x[i] + nd(gen);
      }
      const auto r = stats::pearson_r(x, y);
      REQUIRE(r.r);
      CHECK(std::abs(*r.r - oracle::pearson(x, y)) < 1e-9);
      const double t = *r.r * std::sqrt((n - 2.0) / (1.0 - *r.r * *r.r));
      CHECK(std::abs(*r.p_value - oracle::t_p_value(t, n - 2.0)) < 1e-9);

      const std::size_t m = 2 + gen() % 30;
      std::vector<double> b(m);
      for (auto& v : b) v = 0.3 + 2.0 * nd(gen);
      const auto w = stats::welch_t_test(x, b);
      const auto o = oracle::welch(x, b);
      CHECK(std::abs(w.t - o.t) < 1e-9);
      CHECK(std::abs(w.dof - o.dof) < 1e-9);
      CHECK(std::abs(w.p_value - o.p) < 1e-9);
    }
  }

  TEST_CASE("correlation of a constant column is undefined") {
    const std::vector<double> x{1, 1, 1, 1}, y{1, 2, 3, 4};
    CHECK_FALSE(stats::pearson_r(x, y).r.has_value());
    CHECK_THROWS_AS(stats::pearson_r(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
                    ComputeError);
  }

  TEST_CASE("significance stars") {
    stats::CorrelationResult c;
    c.p_value = 0.005;
    CHECK(c.stars() == "***");
    c.p_value = 0.03;
    CHECK(c.stars() == "**");
    c.p_value = 0.07;
    CHECK(c.stars() == "*");
    c.p_value = 0.2;
    CHECK(c.stars().empty());
  }

  TEST_CASE("median, sd and rmse against oracles") {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> a(2 + gen() % 30), b;
      for (auto& v : a) v = nd(gen);
      for (double v : a) b.push_back(v + nd(gen));
      CHECK(stats::median(a) == oracle::median(a));
      CHECK(std::abs(stats::sample_sd(a) - oracle::sd(a)) < 1e-12);
      CHECK(std::abs(stats::rmse(a, b) - oracle::rmse(a, b)) < 1e-12);
    }
  }
}

TEST_SUITE("models") {
  TEST_CASE("OLS matches the normal-equations oracle") {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t p = 1 + gen() % 6;
      const std::size_t n = p + 5 + gen() % 40;
      const Matrix x = random_matrix(gen, n, p);
      std::vector<double> y(n);
      std::normal_distribution<double> nd;
      for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 + x[i][0] + nd(gen);
      const auto model = ols_fit(x, y);
      const auto beta = oracle::ols_normal_equations(x, y);
      CHECK_FALSE(model.rank_deficient);
      CHECK(std::abs(model.intercept - beta[0]) < 1e-9);
      for (std::size_t j = 0; j < p; ++j) CHECK(std::abs(model.coef[j] - beta[j + 1]) < 1e-9);
    }
  }

  TEST_CASE("OLS tolerates duplicated columns with a minimum-norm solution") {
    std::mt19937_64 gen(6);
    Matrix x = random_matrix(gen, 30, 2);
    for (auto& r : x) r.push_back(r[0]);
    std::vector<double> y;
    for (const auto& r : x) y.push_back(3.0 * r[0] + r[1]);
    const auto m = ols_fit(x, y);
    CHECK(m.rank_deficient);
    CHECK(m.coef[0] == doctest::Approx(1.5));
    CHECK(m.coef[2] == doctest::Approx(1.5));
    CHECK(stats::rmse(ols_predict(m, x), y) < 1e-9);
  }

  TEST_CASE("baseline RMSE is the root mean square of the target") {
    const std::vector<double> y{3, -4};
    CHECK(baseline_rmse(y) == doctest::Approx(std::sqrt(12.5)));
  }

  TEST_CASE("a single unbootstrapped tree finds the exhaustive best root split") {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 30; ++trial) {
      const Matrix x = random_matrix(gen, 25, 3);
      std::vector<double> y;
      std::normal_distribution<double> nd;
      for (const auto& r : x) y.push_back(r[1] > 0 ? 5 + nd(gen) : nd(gen));
      ForestParams fp;
      fp.n_trees = 1;
      fp.bootstrap = false;
      fp.mtry = 3;
      fp.max_depth = 1;
      const auto rf = rf_fit(x, y, fp);
      std::vector<double> l, r;
      const auto& root = rf.trees[0].nodes[0];
      REQUIRE(root.feature >= 0);
      for (std::size_t i = 0; i < x.size(); ++i) {
        (x[i][static_cast<std::size_t>(root.feature)] <= root.threshold ? l : r).push_back(y[i]);
      }
      auto sse = [](const std::vector<double>& v) {
        return oracle::variance(v) * static_cast<double>(v.size() - 1);
      };
      CHECK(sse(l) + sse(r) == doctest::Approx(oracle::best_split_sse(x, y)));
    }
  }

  TEST_CASE("fully grown unbootstrapped trees interpolate distinct rows") {
    std::mt19937_64 gen(10);
    const Matrix x = random_matrix(gen, 40, 2);
    std::vector<double> y;
    for (const auto& r : x) y.push_back(r[0] * r[1]);
    ForestParams fp;
    fp.n_trees = 3;
    fp.bootstrap = false;
    fp.mtry = 2;
    const auto rf = rf_fit(x, y, fp);
    CHECK(stats::rmse(rf.predict(x), y) < 1e-12);
  }

  TEST_CASE("MDI sums to 100 percent on random forests") {
    std::mt19937_64 gen(12);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t p = 1 + gen() % 8;
      const Matrix x = random_matrix(gen, 30, p);
      std::vector<double> y;
      std::normal_distribution<double> nd;
      for (const auto& r : x) y.push_back(r[0] + nd(gen));
      ForestParams fp;
      fp.n_trees = 10;
      fp.seed = gen();
      const auto imp = mdi_importance(rf_fit(x, y, fp));
      CHECK(std::abs(std::accumulate(imp.begin(), imp.end(), 0.0) - 100.0) < 1e-6);
      for (double v : imp) CHECK(v >= 0.0);
    }
  }

  TEST_CASE("MDI concentrates on the only informative feature") {
    std::mt19937_64 gen(14);
    const Matrix x = random_matrix(gen, 300, 3);
    std::vector<double> y;
    std::normal_distribution<double> nd;
    for (const auto& r : x) y.push_back(10.0 * r[0] + 0.1 * nd(gen));
    ForestParams fp;
    fp.seed = 3;
    fp.mtry = 3;
    const auto imp = rf_fit(x, y, fp).importance;
    CHECK(imp[0] > 80.0);
  }

  TEST_CASE("constant target gives equal importance shares") {
    std::mt19937_64 gen(16);
    const Matrix x = random_matrix(gen, 20, 4);
    const std::vector<double> y(20, 1.5);
    const auto rf = rf_fit(x, y, ForestParams{});
    for (double v : rf.importance) CHECK(v == doctest::Approx(25.0));
    CHECK(rf.predict(x[0]) == 1.5);
  }

  TEST_CASE("forest is reproducible for a seed") {
    std::mt19937_64 gen(18);
    const Matrix x = random_matrix(gen, 50, 5);
    std::vector<double> y;
    for (const auto& r : x) y.push_back(r[2]);
    ForestParams fp;
    fp.seed = 99;
    CHECK(rf_fit(x, y, fp).predict(x) == rf_fit(x, y, fp).predict(x));
  }

  TEST_CASE("invalid forest parameters") {
    ForestParams fp;
    fp.n_trees = 0;
    CHECK_THROWS_AS(fp.validate(), ConfigError);
    CHECK(ForestParams{}.mtry_for(10) == 3);
    CHECK(ForestParams{}.mtry_for(2) == 1);
  }
}

TEST_SUITE("evaluation") {
  TEST_CASE("OLS in-sample RMSE is monotone in the feature sets") {
    std::mt19937_64 gen(20);
    for (int trial = 0; trial < 5; ++trial) {
      const auto m = design(gen, 60, 3, 4);
      EvaluationProtocol p;
      p.n_sims = 2;
      p.forest.n_trees = 10;
      const auto rep = evaluate(m, p);
      const double all = rep.get(FeatureSet::all).ols_in_sample_rmse;
      CHECK(all <= rep.get(FeatureSet::structured).ols_in_sample_rmse + 1e-9);
      CHECK(all <= rep.get(FeatureSet::unstructured).ols_in_sample_rmse + 1e-9);
      CHECK(all <= rep.baseline_in_sample + 1e-9);
    }
  }

  TEST_CASE("report is independent of the thread count") {
    std::mt19937_64 gen(22);
    const auto m = design(gen, 40, 2, 3);
    EvaluationProtocol p;
    p.n_sims = 6;
    p.forest.n_trees = 15;
    p.master_seed = 5;
    const auto a = evaluate(m, p);
    p.threads = 3;
    const auto b = evaluate(m, p);
    for (std::size_t s = 0; s < 3; ++s) CHECK(a.sets[s].rf_oos_by_sim == b.sets[s].rf_oos_by_sim);
    CHECK(a.mdi_all == b.mdi_all);
    CHECK(a.baseline_oos_mean == b.baseline_oos_mean);
  }

  TEST_CASE("train size rounds the fraction") {
    std::mt19937_64 gen(24);
    const auto m = design(gen, 21, 1, 1);
    EvaluationProtocol p;
    p.n_sims = 1;
    p.forest.n_trees = 5;
    CHECK(evaluate(m, p).n_train == 11);
    CHECK_THROWS_AS(evaluate(design(gen, 3, 1, 1), p), ComputeError);
  }

  TEST_CASE("quartile contrast pools per-review values") {
    std::map<std::string, double> scores;
    std::map<std::string, std::vector<double>> values;
    for (int i = 0; i < 8; ++i) {
      const std::string id = "N" + std::to_string(i);
      scores[id] = i;
      values[id] = {static_cast<double>(i), static_cast<double>(i) + 0.5};
    }
    const auto q = quartile_contrast(scores, values);
    // Hazen percentiles 6.25 .. 93.75: two neighborhoods on each side.
    CHECK(q.neighborhoods_upper == 2);
    CHECK(q.neighborhoods_lower == 2);
    CHECK(q.upper_mean == doctest::Approx(6.75));
    CHECK(q.lower_mean == doctest::Approx(0.75));
    const auto o = oracle::welch({6, 6.5, 7, 7.5}, {0, 0.5, 1, 1.5});
    CHECK(q.t == doctest::Approx(o.t));
  }
}

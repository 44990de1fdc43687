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

#include "gentricast/error.hpp"
#include "gentricast/scoring.hpp"
#include "oracles/oracles.hpp"

using namespace gentricast;

namespace {

SocioPanelRow row(const std::string& id, Window w, double a, double e, double h, double i,
                  std::optional<double> race = std::nullopt) {
  return {id, w, a, e, h, i, race};
}

}  // namespace

TEST_SUITE("scoring") {
  TEST_CASE("percentile_rank matches the rank-counting oracle on random arrays with ties") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + gen() % 60;
      std::vector<double> v(n);
      for (auto& x : v) x = static_cast<double>(gen() % 10);
      CHECK(percentile_rank(v) == oracle::hazen_percentiles(v));
    }
  }

  TEST_CASE("percentile properties: bounds, ties, mean 50") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 1 + gen() % 40;
      std::vector<double> v(n);
      for (auto& x : v) x = static_cast<double>(gen() % 7);
      const auto p = percentile_rank(v);
      double sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(p[i] > 0.0);
        CHECK(p[i] < 100.0);
        for (std::size_t j = 0; j < n; ++j) {
          if (v[i] == v[j]) CHECK(p[i] == p[j]);
          if (v[i] < v[j]) CHECK(p[i] < p[j]);
        }
        sum += p[i];
      }
      CHECK(sum / static_cast<double>(n) == doctest::Approx(50.0));
    }
  }

  TEST_CASE("percentile_rank rejects empty and non-finite input") {
    CHECK_THROWS_AS(percentile_rank(std::vector<double>{}), ComputeError);
    CHECK_THROWS_AS(percentile_rank(std::vector<double>{1.0, NAN}), ComputeError);
  }

  TEST_CASE("target specs") {
    CHECK(TargetSpec::parse("equal4").weights.size() == 4);
    CHECK(TargetSpec::parse("race5").uses(Measure::race));
    CHECK(TargetSpec::parse("rent").uses(Measure::housing));
    CHECK_THROWS_AS(TargetSpec::parse("bogus"), ConfigError);
    TargetSpec bad{"bad", {{Measure::age, 0.7}}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }

  TEST_CASE("index is the plain mean under the default spec and score is the difference") {
    PercentileVector p{10, 20, 30, 40, {}};
    const auto idx = neighborhood_index(p, TargetSpec::equal_four(), Window::tw);
    CHECK(idx.value == doctest::Approx(25.0));
    PercentileVector q{20, 20, 20, 20, {}};
    const auto prev = neighborhood_index(q, TargetSpec::equal_four(), Window::tw_minus_1);
    CHECK(gentrification_score(idx, prev).value == doctest::Approx(5.0));
    CHECK_THROWS_AS(gentrification_score(idx, idx), ComputeError);
  }

  TEST_CASE("unchanged panel gives zero scores") {
    std::vector<SocioPanelRow> a, b;
    for (int i = 0; i < 10; ++i) {
      const std::string id = "N" + std::to_string(i);
      a.push_back(row(id, Window::tw_minus_1, i, 2 * i, 3 * i, 4 * i));
      b.push_back(row(id, Window::tw, i, 2 * i, 3 * i, 4 * i));
    }
    const auto t = build_target(build_panel(a, b), TargetSpec::equal_four(), Country::us);
    for (const auto& r : t.rows) CHECK(r.score == 0.0);
    CHECK(t.disadvantaged_count() == 5);
  }

  TEST_CASE("disadvantaged selection includes boundary ties") {
    std::map<std::string, double> idx{{"a", 1}, {"b", 2}, {"c", 2}, {"d", 3}};
    // Hazen: a 12.5, b/c 50, d 87.5.
    CHECK(select_disadvantaged(idx) == std::set<std::string>{"a", "b", "c"});
  }

  TEST_CASE("race on a UK city is unsupported") {
    std::vector<SocioPanelRow> a{row("A", Window::tw_minus_1, 1, 1, 1, 1)};
    std::vector<SocioPanelRow> b{row("A", Window::tw, 1, 1, 1, 1)};
    CHECK_THROWS_AS(build_target(build_panel(a, b), TargetSpec::equal_five_with_race(), Country::uk),
                    UnsupportedMeasure);
  }

  TEST_CASE("summary median and SD match brute-force recomputation") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    std::vector<SocioPanelRow> a, b;
    for (int i = 0; i < 40; ++i) {
      const std::string id = "N" + std::to_string(100 + i);
      a.push_back(row(id, Window::tw_minus_1, nd(gen), nd(gen), nd(gen), nd(gen)));
      b.push_back(row(id, Window::tw, nd(gen), nd(gen), nd(gen), nd(gen)));
    }
    const auto t = build_target(build_panel(a, b), TargetSpec::equal_four(), Country::us);
    std::vector<double> scores;
    for (const auto& r : t.rows) {
      if (r.disadvantaged) scores.push_back(r.score);
    }
    const auto summary = summarize_scores(t);
    const auto it = std::find_if(summary.begin(), summary.end(),
                                 [](const SummaryRow& s) { return s.measure == "gentrification_score"; });
    REQUIRE(it != summary.end());
    CHECK(it->median == doctest::Approx(oracle::median(scores)).epsilon(1e-12));
    CHECK(it->sd == doctest::Approx(oracle::sd(scores)).epsilon(1e-12));
  }

  TEST_CASE("alternative targets keep the equal-four disadvantaged set") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u;
    std::vector<SocioPanelRow> a, b;
    for (int i = 0; i < 30; ++i) {
      const std::string id = "N" + std::to_string(i);
      a.push_back(row(id, Window::tw_minus_1, u(gen), u(gen), u(gen), u(gen), u(gen)));
      b.push_back(row(id, Window::tw, u(gen), u(gen), u(gen), u(gen), u(gen)));
    }
    const auto panel = build_panel(a, b);
    const auto t4 = build_target(panel, TargetSpec::equal_four(), Country::us);
    const auto tr = build_target(panel, TargetSpec::parse("income"), Country::us);
    for (std::size_t i = 0; i < t4.rows.size(); ++i) {
      CHECK(t4.rows[i].disadvantaged == tr.rows[i].disadvantaged);
    }
    CHECK(tr.rows[3].score == doctest::Approx(tr.rows[3].pct_tw.income - tr.rows[3].pct_prev.income));
  }
}

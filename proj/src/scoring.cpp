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

#include "gentricast/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "gentricast/error.hpp"
#include "gentricast/stats.hpp"

namespace gentricast {

std::string_view to_string(Measure m) noexcept {
  switch (m) {
    case Measure::age: return "age";
    case Measure::education: return "education";
    case Measure::housing: return "housing";
    case Measure::income: return "income";
    case Measure::race: return "race";
  }
  return "?";
}

std::optional<Measure> parse_measure(std::string_view s) noexcept {
  if (s == "age") return Measure::age;
  if (s == "education") return Measure::education;
  if (s == "housing" || s == "rent") return Measure::housing;
  if (s == "income") return Measure::income;
  if (s == "race") return Measure::race;
  return std::nullopt;
}

std::string_view to_string(Country c) noexcept { return c == Country::us ? "US" : "UK"; }

std::optional<Country> parse_country(std::string_view s) noexcept {
  if (s == "US" || s == "us") return Country::us;
  if (s == "UK" || s == "uk" || s == "GB" || s == "gb") return Country::uk;
  return std::nullopt;
}

double PercentileVector::get(Measure m) const {
  switch (m) {
    case Measure::age: return age;
    case Measure::education: return education;
    case Measure::housing: return housing;
    case Measure::income: return income;
    case Measure::race:
      if (!race) throw ComputeError("race percentile requested but not available");
      return *race;
  }
  throw ComputeError("unknown measure");
}

TargetSpec TargetSpec::equal_four() {
  return {"equal4",
          {{Measure::age, 0.25}, {Measure::education, 0.25}, {Measure::housing, 0.25},
           {Measure::income, 0.25}}};
}

TargetSpec TargetSpec::equal_five_with_race() {
  return {"race5",
          {{Measure::age, 0.2}, {Measure::education, 0.2}, {Measure::housing, 0.2},
           {Measure::income, 0.2}, {Measure::race, 0.2}}};
}

TargetSpec TargetSpec::single(Measure m) { return {std::string(to_string(m)), {{m, 1.0}}}; }

TargetSpec TargetSpec::parse(std::string_view name) {
  if (name.empty() || name == "equal4" || name == "default") return equal_four();
  if (name == "race5") return equal_five_with_race();
  if (auto m = parse_measure(name)) return single(*m);
  throw ConfigError(fmt::format("unknown target '{}' (expected equal4, race5, age, education, "
                                "housing, rent, income or race)",
                                name));
}

bool TargetSpec::uses(Measure m) const noexcept {
  return std::any_of(weights.begin(), weights.end(), [m](const auto& w) { return w.first == m; });
}

void TargetSpec::validate() const {
  if (weights.empty()) throw ConfigError("target spec has no measures");
  double total = 0.0;
  for (const auto& [m, w] : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("target weights must be non-negative");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw ConfigError(fmt::format("target weights sum to {}, expected 1", total));
  }
}

std::vector<double> percentile_rank(std::span<const double> values) {
  if (values.empty()) throw ComputeError("percentile_rank: empty input");
  for (double v : values) {
    if (!std::isfinite(v)) throw ComputeError("percentile_rank: non-finite value");
  }
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> pct(n);
  std::size_t lo = 0;
  while (lo < n) {
    std::size_t hi = lo;
    while (hi + 1 < n && values[order[hi + 1]] == values[order[lo]]) ++hi;
    // 1-based positions lo+1 .. hi+1, average rank (lo+hi+2)/2
    const double twice_rank_minus_one = static_cast<double>(lo + hi + 1);
    const double p = 100.0 * twice_rank_minus_one / (2.0 * static_cast<double>(n));
    for (std::size_t k = lo; k <= hi; ++k) pct[order[k]] = p;
    lo = hi + 1;
  }
  return pct;
}

NeighborhoodIndex neighborhood_index(const PercentileVector& p, const TargetSpec& spec,
                                     Window window) {
  spec.validate();
  double acc = 0.0;
  for (const auto& [m, w] : spec.weights) acc += w * p.get(m);
  return {acc, window};
}

GentrificationScore gentrification_score(const NeighborhoodIndex& idx_tw,
                                         const NeighborhoodIndex& idx_prev) {
  if (idx_tw.window == idx_prev.window) {
    throw ComputeError("gentrification_score: both indices belong to the same window");
  }
  return {idx_tw.value - idx_prev.value};
}

std::set<std::string> select_disadvantaged(const std::map<std::string, double>& indices_prev) {
  std::vector<double> values;
  values.reserve(indices_prev.size());
  for (const auto& [id, v] : indices_prev) values.push_back(v);
  std::set<std::string> out;
  if (values.empty()) return out;
  const auto pct = percentile_rank(values);
  std::size_t i = 0;
  for (const auto& [id, v] : indices_prev) {
    if (pct[i++] <= 50.0) out.insert(id);
  }
  return out;
}

std::size_t ScoreTable::disadvantaged_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ScoreRow& r) { return r.disadvantaged; }));
}

std::map<std::string, double> ScoreTable::scores(bool disadvantaged_only) const {
  std::map<std::string, double> out;
  for (const auto& r : rows) {
    if (!disadvantaged_only || r.disadvantaged) out.emplace(r.neighborhood_id, r.score);
  }
  return out;
}

namespace {

std::vector<PercentileVector> window_percentiles(const std::vector<const SocioPanelRow*>& rows,
                                                 bool with_race) {
  const std::size_t n = rows.size();
  std::vector<double> age(n), edu(n), house(n), income(n), race(n);
  for (std::size_t i = 0; i < n; ++i) {
    age[i] = rows[i]->age;
    edu[i] = rows[i]->education;
    house[i] = rows[i]->housing;
    income[i] = rows[i]->income;
    if (with_race) {
      if (!rows[i]->race) {
        throw ComputeError("race measure missing for neighborhood '" + rows[i]->neighborhood_id +
                           "' in window " + std::string(to_string(rows[i]->window)));
      }
      race[i] = *rows[i]->race;
    }
  }
  const auto p_age = percentile_rank(age);
  const auto p_edu = percentile_rank(edu);
  const auto p_house = percentile_rank(house);
  const auto p_income = percentile_rank(income);
  std::vector<double> p_race;
  if (with_race) p_race = percentile_rank(race);
  std::vector<PercentileVector> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = {p_age[i], p_edu[i], p_house[i], p_income[i], std::nullopt};
    if (with_race) out[i].race = p_race[i];
  }
  return out;
}

}  // namespace

ScoreTable build_target(const SocioPanel& panel, const TargetSpec& spec, Country country) {
  spec.validate();
  const bool with_race = spec.uses(Measure::race);
  if (with_race && country == Country::uk) {
    throw UnsupportedMeasure("race is not published for UK wards; use a US city or drop race");
  }
  if (panel.usable.empty()) throw ComputeError("no neighborhood has both panel windows");

  std::vector<const SocioPanelRow*> prev, curr;
  for (const auto& id : panel.usable) {
    prev.push_back(&panel.prev.at(id));
    curr.push_back(&panel.curr.at(id));
  }
  const auto pct_prev = window_percentiles(prev, with_race);
  const auto pct_tw = window_percentiles(curr, with_race);

  const TargetSpec base = TargetSpec::equal_four();
  std::map<std::string, double> base_prev;
  ScoreTable table;
  table.spec = spec;
  for (std::size_t i = 0; i < panel.usable.size(); ++i) {
    ScoreRow row;
    row.neighborhood_id = panel.usable[i];
    row.pct_prev = pct_prev[i];
    row.pct_tw = pct_tw[i];
    const auto ip = neighborhood_index(row.pct_prev, spec, Window::tw_minus_1);
    const auto it = neighborhood_index(row.pct_tw, spec, Window::tw);
    row.index_prev = ip.value;
    row.index_tw = it.value;
    row.score = gentrification_score(it, ip).value;
    base_prev[row.neighborhood_id] =
        neighborhood_index(row.pct_prev, base, Window::tw_minus_1).value;
    table.rows.push_back(std::move(row));
  }
  const auto disadvantaged = select_disadvantaged(base_prev);
  for (auto& row : table.rows) row.disadvantaged = disadvantaged.count(row.neighborhood_id) > 0;
  return table;
}

std::vector<SummaryRow> summarize_scores(const ScoreTable& table) {
  std::vector<const ScoreRow*> rows;
  for (const auto& r : table.rows) {
    if (r.disadvantaged) rows.push_back(&r);
  }
  if (rows.empty()) {
    for (const auto& r : table.rows) rows.push_back(&r);
  }
  std::vector<SummaryRow> out;
  if (rows.empty()) return out;
  auto add = [&](std::string measure, std::string period, auto&& getter) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto* r : rows) v.push_back(getter(*r));
    out.push_back({std::move(measure), std::move(period), stats::median(v), stats::sample_sd(v)});
  };
  std::vector<Measure> measures{Measure::age, Measure::education, Measure::income,
                                Measure::housing};
  if (rows.front()->pct_prev.race) measures.push_back(Measure::race);
  for (Measure m : measures) {
    add(std::string(to_string(m)), "tw_minus_1", [m](const ScoreRow& r) { return r.pct_prev.get(m); });
    add(std::string(to_string(m)), "tw", [m](const ScoreRow& r) { return r.pct_tw.get(m); });
  }
  add("neighborhood_index", "tw_minus_1", [](const ScoreRow& r) { return r.index_prev; });
  add("neighborhood_index", "tw", [](const ScoreRow& r) { return r.index_tw; });
  add("gentrification_score", "change", [](const ScoreRow& r) { return r.score; });
  return out;
}

}  // namespace gentricast

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

#pragma once

// Gentrification score construction.
//
// Each raw socioeconomic measure is replaced by its within-city percentile
// (Hazen definition, average ranks for ties), the percentiles are averaged
// into a neighborhood index per window, and the score is the change in
// index between the two windows. "Disadvantaged" neighborhoods are those
// whose early-window index sits at or below the city's 50th percentile.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gentricast/corpus.hpp"

namespace gentricast {

enum class Measure { age, education, housing, income, race };

std::string_view to_string(Measure m) noexcept;
/// Accepts "rent" as an alias for housing.
std::optional<Measure> parse_measure(std::string_view s) noexcept;

enum class Country { us, uk };

std::string_view to_string(Country c) noexcept;
std::optional<Country> parse_country(std::string_view s) noexcept;

struct PercentileVector {
  double age = 0.0;
  double education = 0.0;
  double housing = 0.0;
  double income = 0.0;
  std::optional<double> race;

  /// Throws ComputeError for an absent race component.
  double get(Measure m) const;
};

struct NeighborhoodIndex {
  double value = 0.0;
  Window window = Window::tw;
};

struct GentrificationScore {
  double value = 0.0;
};

/// Weighted subset of measures; weights sum to one.
struct TargetSpec {
  std::string name;
  std::vector<std::pair<Measure, double>> weights;

  static TargetSpec equal_four();
  static TargetSpec equal_five_with_race();
  static TargetSpec single(Measure m);
  /// "equal4" (default), "race5", or a single measure name
  /// (age, education, housing|rent, income, race).
  static TargetSpec parse(std::string_view name);

  bool uses(Measure m) const noexcept;
  /// Throws ConfigError when empty, negative, or weights do not sum to 1.
  void validate() const;
};

/// Hazen percentiles: 100 * (avg_rank - 0.5) / n. Throws on empty input
/// or non-finite values.
std::vector<double> percentile_rank(std::span<const double> values);

NeighborhoodIndex neighborhood_index(const PercentileVector& p, const TargetSpec& spec,
                                     Window window = Window::tw);

/// idx_tw - idx_prev. Throws ComputeError when both carry the same window.
GentrificationScore gentrification_score(const NeighborhoodIndex& idx_tw,
                                         const NeighborhoodIndex& idx_prev);

/// Neighborhoods whose index has Hazen percentile <= 50 within the set.
/// Ties at the boundary are all included.
std::set<std::string> select_disadvantaged(const std::map<std::string, double>& indices_prev);

struct ScoreRow {
  std::string neighborhood_id;
  PercentileVector pct_prev;
  PercentileVector pct_tw;
  double index_prev = 0.0;
  double index_tw = 0.0;
  double score = 0.0;
  bool disadvantaged = false;
};

struct ScoreTable {
  TargetSpec spec;
  std::vector<ScoreRow> rows;  // sorted by neighborhood_id

  std::size_t disadvantaged_count() const noexcept;
  std::map<std::string, double> scores(bool disadvantaged_only) const;
};

/// Full pipeline over the usable neighborhoods of a panel. Disadvantaged
/// status always comes from the equal-weight four-measure early index so
/// that alternative targets are studied on the same neighborhoods.
/// Throws UnsupportedMeasure for race on a UK city and ComputeError when a
/// requested race value is missing.
ScoreTable build_target(const SocioPanel& panel, const TargetSpec& spec, Country country);

struct SummaryRow {
  std::string measure;
  std::string period;
  double median = 0.0;
  double sd = 0.0;
};

/// Median / sample SD of every percentile, both indices and the score over
/// the disadvantaged neighborhoods (or all rows when none are flagged).
std::vector<SummaryRow> summarize_scores(const ScoreTable& table);

}  // namespace gentricast

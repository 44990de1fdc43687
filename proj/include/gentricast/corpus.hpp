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

// Canonical data model for listings, reviews and socioeconomic panels,
// plus ingestion from delimited files. Malformed rows never abort
// ingestion; they land in the IngestReport with their line number.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gentricast {

using Date = std::chrono::year_month_day;

/// Accepts "YYYY-MM-DD" optionally followed by a time part ("T..." or " ...").
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& d);

struct Listing {
  std::string listing_id;
  std::string neighborhood_id;
  double price = 0.0;  // per night, normalized currency
  double bedrooms = 0.0;
  std::optional<double> star_rating;           // [1, 5]
  std::optional<double> location_star_rating;  // [1, 10]
  std::map<std::string, double> subratings;    // cleanliness, accuracy, ...
};

struct Review {
  std::string review_id;
  std::string listing_id;
  std::string text;
  Date date{};
  std::optional<std::string> language;
};

enum class Window { tw_minus_1, tw };

std::string_view to_string(Window w) noexcept;
std::optional<Window> parse_window(std::string_view s) noexcept;

struct SocioPanelRow {
  std::string neighborhood_id;
  Window window = Window::tw;
  double age = 0.0;
  double education = 0.0;
  double housing = 0.0;
  double income = 0.0;
  std::optional<double> race;
};

struct CorpusConfig {
  Date window_start{std::chrono::year{2013}, std::chrono::January, std::chrono::day{1}};
  Date window_end{std::chrono::year{2017}, std::chrono::December, std::chrono::day{31}};
  std::size_t min_listings = 5;
  std::string language = "en";
  double currency_rate = 1.0;
  char delimiter = ',';

  /// Throws ConfigError.
  void validate() const;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

/// rows == parsed + errors.size() + sum(filtered)
struct IngestReport {
  std::string source;
  std::size_t rows = 0;
  std::size_t parsed = 0;
  std::vector<RowError> errors;
  std::map<std::string, std::size_t> filtered;

  std::size_t filtered_total() const noexcept;
  bool balanced() const noexcept { return rows == parsed + errors.size() + filtered_total(); }
};

template <class T>
struct Ingested {
  std::vector<T> items;
  IngestReport report;
};

/// Subrating columns recognised in listing files.
const std::vector<std::string>& known_subratings();

Ingested<Listing> ingest_listings(std::istream& in, const std::string& source,
                                  const CorpusConfig& config);
Ingested<Listing> ingest_listings(const std::filesystem::path& path, const CorpusConfig& config);

/// Reviews dated outside [window_start, window_end] are counted under
/// filtered["outside_window"].
Ingested<Review> ingest_reviews(std::istream& in, const std::string& source,
                                const CorpusConfig& config);
Ingested<Review> ingest_reviews(const std::filesystem::path& path, const CorpusConfig& config);

/// One row per neighborhood for the given window. A `window` column is
/// optional; when present it must match. Duplicate neighborhood ids throw
/// IngestError; rows missing a core measure are row-level errors.
Ingested<SocioPanelRow> ingest_socio(std::istream& in, const std::string& source, Window window,
                                     char delimiter = ',');
Ingested<SocioPanelRow> ingest_socio(const std::filesystem::path& path, Window window,
                                     char delimiter = ',');

/// Both windows joined by neighborhood id.
struct SocioPanel {
  std::map<std::string, SocioPanelRow> prev;  // tw - 1
  std::map<std::string, SocioPanelRow> curr;  // tw
  std::vector<std::string> usable;            // present in both windows, sorted
  std::vector<std::string> flagged;           // present in one window only, sorted
};

SocioPanel build_panel(const std::vector<SocioPanelRow>& prev_rows,
                       const std::vector<SocioPanelRow>& curr_rows);

// ---------------------------------------------------------------------------
// Language filtering

/// Stopword-profile detector. Returns the ISO 639-1 code whose stopword
/// list covers the largest fraction of tokens; nullopt when the text has
/// no tokens or the best fraction is tied (including all zero).
std::optional<std::string> detect_language(std::string_view text);

struct LanguageFilterResult {
  std::vector<Review> retained;
  std::size_t excluded_other_language = 0;
  std::size_t excluded_undetectable = 0;
};

/// A declared tag wins when present (primary subtag compared
/// case-insensitively); otherwise detect_language decides.
LanguageFilterResult filter_language(const std::vector<Review>& reviews,
                                     std::string_view language = "en");

// ---------------------------------------------------------------------------
// Neighborhood filtering

struct ActiveNeighborhoods {
  std::set<std::string> active;
  std::set<std::string> removed;
  std::map<std::string, std::size_t> listing_counts;
  std::map<std::string, std::size_t> review_counts;
  std::size_t reviews_without_listing = 0;
};

/// Drops neighborhoods with fewer than config.min_listings listings.
ActiveNeighborhoods filter_neighborhoods(const std::vector<Listing>& listings,
                                         const std::vector<Review>& reviews,
                                         const CorpusConfig& config);

std::vector<Listing> restrict_listings(const std::vector<Listing>& listings,
                                       const std::set<std::string>& neighborhoods);

/// listing_id -> neighborhood_id
std::map<std::string, std::string> listing_neighborhoods(const std::vector<Listing>& listings);

}  // namespace gentricast

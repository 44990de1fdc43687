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

#include "gentricast/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "gentricast/csv.hpp"
#include "gentricast/error.hpp"

namespace gentricast {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Scraped prices come as "$1,200.00" or "£45".
std::optional<double> parse_price(std::string_view s) {
  s = trim(s);
  std::string cleaned;
  cleaned.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '$' || c == ',') continue;
    if (s.compare(i, 2, "\xC2\xA3") == 0 || s.compare(i, 3, "\xE2\x82\xAC") == 0) {
      i += (s[i + 1] == '\xA3') ? 1 : 2;
      continue;
    }
    cleaned.push_back(c);
  }
  return parse_number(cleaned);
}

template <class Fn>
void for_each_row(const csv::Table& table, IngestReport& report, Fn&& parse_row) {
  report.source = table.source;
  for (const auto& rec : table.records) {
    ++report.rows;
    if (rec.fields.size() != table.header.size()) {
      report.errors.push_back({rec.line, fmt::format("expected {} fields, found {}",
                                                     table.header.size(), rec.fields.size())});
      continue;
    }
    parse_row(rec);
  }
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
  auto num = [&](std::size_t off, std::size_t len) -> std::optional<int> {
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + off, text.data() + off + len, v);
    if (ec != std::errc() || ptr != text.data() + off + len) return std::nullopt;
    return v;
  };
  auto y = num(0, 4), m = num(5, 2), d = num(8, 2);
  if (!y || !m || !d) return std::nullopt;
  Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
            std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(const Date& d) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(d.year()),
                     static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
}

std::string_view to_string(Window w) noexcept {
  return w == Window::tw_minus_1 ? "tw_minus_1" : "tw";
}

std::optional<Window> parse_window(std::string_view s) noexcept {
  s = trim(s);
  if (s == "tw_minus_1") return Window::tw_minus_1;
  if (s == "tw") return Window::tw;
  return std::nullopt;
}

void CorpusConfig::validate() const {
  if (!window_start.ok() || !window_end.ok()) throw ConfigError("corpus window dates are invalid");
  if (!(window_start < window_end)) {
    throw ConfigError("corpus.window_start must precede corpus.window_end");
  }
  if (!(currency_rate > 0.0) || !std::isfinite(currency_rate)) {
    throw ConfigError("corpus.currency_rate must be a positive finite number");
  }
  if (language.empty()) throw ConfigError("corpus.language must not be empty");
}

std::size_t IngestReport::filtered_total() const noexcept {
  std::size_t total = 0;
  for (const auto& [reason, count] : filtered) total += count;
  return total;
}

const std::vector<std::string>& known_subratings() {
  static const std::vector<std::string> names{"cleanliness", "accuracy", "value",
                                              "communication", "checkin"};
  return names;
}

// ---------------------------------------------------------------------------

Ingested<Listing> ingest_listings(std::istream& in, const std::string& source,
                                  const CorpusConfig& config) {
  const csv::Table table = csv::read(in, source, config.delimiter);
  const std::size_t c_id = table.require("listing_id");
  const std::size_t c_nb = table.require("neighborhood_id");
  const std::size_t c_price = table.require("price");
  const std::size_t c_bed = table.require("bedrooms");
  const std::size_t c_star = table.require("star_rating");
  const std::size_t c_loc = table.require("location_star_rating");
  std::vector<std::pair<std::string, std::size_t>> sub_cols;
  for (const auto& name : known_subratings()) {
    if (auto idx = table.column(name)) sub_cols.emplace_back(name, *idx);
  }

  Ingested<Listing> out;
  for_each_row(table, out.report, [&](const csv::Record& rec) {
    const auto& f = rec.fields;
    auto fail = [&](std::string msg) { out.report.errors.push_back({rec.line, std::move(msg)}); };
    Listing l;
    l.listing_id = std::string(trim(f[c_id]));
    l.neighborhood_id = std::string(trim(f[c_nb]));
    if (l.listing_id.empty()) return fail("empty listing_id");
    if (l.neighborhood_id.empty()) return fail("empty neighborhood_id");
    auto price = parse_price(f[c_price]);
    if (!price) return fail(fmt::format("unparseable price '{}'", f[c_price]));
    if (*price < 0) return fail(fmt::format("price must be non-negative, got {}", *price));
    l.price = *price * config.currency_rate;
    auto beds = parse_number(f[c_bed]);
    if (!beds) return fail(fmt::format("unparseable bedrooms '{}'", f[c_bed]));
    if (*beds < 0) return fail(fmt::format("bedrooms must be non-negative, got {}", *beds));
    l.bedrooms = *beds;
    if (!trim(f[c_star]).empty()) {
      auto star = parse_number(f[c_star]);
      if (!star) return fail(fmt::format("unparseable star_rating '{}'", f[c_star]));
      if (*star < 1 || *star > 5) return fail(fmt::format("star_rating {} outside [1,5]", *star));
      l.star_rating = *star;
    }
    if (!trim(f[c_loc]).empty()) {
      auto loc = parse_number(f[c_loc]);
      if (!loc) return fail(fmt::format("unparseable location_star_rating '{}'", f[c_loc]));
      if (*loc < 1 || *loc > 10) {
        return fail(fmt::format("location_star_rating {} outside [1,10]", *loc));
      }
      l.location_star_rating = *loc;
    }
    for (const auto& [name, idx] : sub_cols) {
      if (trim(f[idx]).empty()) continue;
      auto v = parse_number(f[idx]);
      if (!v) return fail(fmt::format("unparseable {} '{}'", name, f[idx]));
      l.subratings[name] = *v;
    }
    out.items.push_back(std::move(l));
    ++out.report.parsed;
  });
  return out;
}

Ingested<Listing> ingest_listings(const std::filesystem::path& path, const CorpusConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  return ingest_listings(in, path.string(), config);
}

Ingested<Review> ingest_reviews(std::istream& in, const std::string& source,
                                const CorpusConfig& config) {
  const csv::Table table = csv::read(in, source, config.delimiter);
  const std::size_t c_id = table.require("review_id");
  const std::size_t c_listing = table.require("listing_id");
  const std::size_t c_date = table.require("date");
  const std::size_t c_text = table.require("text");
  const auto c_lang = table.column("language");

  Ingested<Review> out;
  for_each_row(table, out.report, [&](const csv::Record& rec) {
    const auto& f = rec.fields;
    auto fail = [&](std::string msg) { out.report.errors.push_back({rec.line, std::move(msg)}); };
    Review r;
    r.review_id = std::string(trim(f[c_id]));
    r.listing_id = std::string(trim(f[c_listing]));
    if (r.review_id.empty()) return fail("empty review_id");
    if (r.listing_id.empty()) return fail("empty listing_id");
    auto date = parse_date(f[c_date]);
    if (!date) return fail(fmt::format("unparseable date '{}'", f[c_date]));
    r.date = *date;
    if (r.date < config.window_start || config.window_end < r.date) {
      ++out.report.filtered["outside_window"];
      return;
    }
    r.text = f[c_text];
    if (c_lang) {
      auto tag = trim(f[*c_lang]);
      if (!tag.empty()) r.language = std::string(tag);
    }
    out.items.push_back(std::move(r));
    ++out.report.parsed;
  });
  return out;
}

Ingested<Review> ingest_reviews(const std::filesystem::path& path, const CorpusConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  return ingest_reviews(in, path.string(), config);
}

Ingested<SocioPanelRow> ingest_socio(std::istream& in, const std::string& source, Window window,
                                     char delimiter) {
  const csv::Table table = csv::read(in, source, delimiter);
  const std::size_t c_id = table.require("neighborhood_id");
  const std::size_t c_age = table.require("age");
  const std::size_t c_edu = table.require("education");
  const std::size_t c_house = table.require("housing");
  const std::size_t c_income = table.require("income");
  const auto c_window = table.column("window");
  const auto c_race = table.column("race");

  Ingested<SocioPanelRow> out;
  std::map<std::string, std::size_t> seen;  // id -> line
  for_each_row(table, out.report, [&](const csv::Record& rec) {
    const auto& f = rec.fields;
    auto fail = [&](std::string msg) { out.report.errors.push_back({rec.line, std::move(msg)}); };
    SocioPanelRow row;
    row.neighborhood_id = std::string(trim(f[c_id]));
    if (row.neighborhood_id.empty()) return fail("empty neighborhood_id");
    if (c_window) {
      auto w = parse_window(f[*c_window]);
      if (!w) return fail(fmt::format("unknown window '{}'", f[*c_window]));
      if (*w != window) {
        return fail(fmt::format("row belongs to window {}, expected {}", to_string(*w),
                                to_string(window)));
      }
    }
    row.window = window;
    if (auto [it, inserted] = seen.emplace(row.neighborhood_id, rec.line); !inserted) {
      throw IngestError(fmt::format("{}:{}: duplicate neighborhood_id '{}' in window {} (first "
                                    "seen on line {})",
                                    source, rec.line, row.neighborhood_id, to_string(window),
                                    it->second));
    }
    const std::pair<std::size_t, double*> measures[] = {
        {c_age, &row.age}, {c_edu, &row.education}, {c_house, &row.housing},
        {c_income, &row.income}};
    for (auto [col, dst] : measures) {
      auto v = parse_number(f[col]);
      if (!v) {
        return fail(fmt::format("missing or unparseable {} '{}'", table.header[col], f[col]));
      }
      *dst = *v;
    }
    if (c_race && !trim(f[*c_race]).empty()) {
      auto v = parse_number(f[*c_race]);
      if (!v) return fail(fmt::format("unparseable race '{}'", f[*c_race]));
      row.race = *v;
    }
    out.items.push_back(std::move(row));
    ++out.report.parsed;
  });
  return out;
}

Ingested<SocioPanelRow> ingest_socio(const std::filesystem::path& path, Window window,
                                     char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  return ingest_socio(in, path.string(), window, delimiter);
}

SocioPanel build_panel(const std::vector<SocioPanelRow>& prev_rows,
                       const std::vector<SocioPanelRow>& curr_rows) {
  SocioPanel panel;
  for (const auto& r : prev_rows) {
    if (!panel.prev.emplace(r.neighborhood_id, r).second) {
      throw IngestError("duplicate neighborhood_id '" + r.neighborhood_id + "' in window tw_minus_1");
    }
  }
  for (const auto& r : curr_rows) {
    if (!panel.curr.emplace(r.neighborhood_id, r).second) {
      throw IngestError("duplicate neighborhood_id '" + r.neighborhood_id + "' in window tw");
    }
  }
  for (const auto& [id, row] : panel.prev) {
    (panel.curr.count(id) ? panel.usable : panel.flagged).push_back(id);
  }
  for (const auto& [id, row] : panel.curr) {
    if (!panel.prev.count(id)) panel.flagged.push_back(id);
  }
  std::sort(panel.flagged.begin(), panel.flagged.end());
  return panel;
}

// ---------------------------------------------------------------------------

std::map<std::string, std::string> listing_neighborhoods(const std::vector<Listing>& listings) {
  std::map<std::string, std::string> out;
  for (const auto& l : listings) out.emplace(l.listing_id, l.neighborhood_id);
  return out;
}

ActiveNeighborhoods filter_neighborhoods(const std::vector<Listing>& listings,
                                         const std::vector<Review>& reviews,
                                         const CorpusConfig& config) {
  ActiveNeighborhoods out;
  for (const auto& l : listings) ++out.listing_counts[l.neighborhood_id];
  const auto owner = listing_neighborhoods(listings);
  for (const auto& r : reviews) {
    auto it = owner.find(r.listing_id);
    if (it == owner.end()) {
      ++out.reviews_without_listing;
      continue;
    }
    ++out.review_counts[it->second];
  }
  for (const auto& [id, count] : out.listing_counts) {
    (count < config.min_listings ? out.removed : out.active).insert(id);
  }
  return out;
}

std::vector<Listing> restrict_listings(const std::vector<Listing>& listings,
                                       const std::set<std::string>& neighborhoods) {
  std::vector<Listing> out;
  for (const auto& l : listings) {
    if (neighborhoods.count(l.neighborhood_id)) out.push_back(l);
  }
  return out;
}

}  // namespace gentricast

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

#include "gentricast/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "gentricast/csv.hpp"
#include "gentricast/error.hpp"
#include "gentricast/rng.hpp"

namespace gentricast {

void SynthConfig::validate() const {
  if (n_neighborhoods < 8) throw ConfigError("synth: n_neighborhoods must be >= 8");
  if (!(latent_sd > 0.0)) throw ConfigError("synth: latent_sd must be positive");
  for (double v : {latent_mean, advantaged_change_scale, panel_noise, listings_base,
                   listings_slope, listings_noise, reviews_mean, reviews_spread,
                   location_rate_base, location_rate_slope, positive_rate_base,
                   positive_rate_slope, price_base, price_slope, price_noise,
                   foreign_review_rate, out_of_window_rate, missing_star_rate}) {
    if (!std::isfinite(v)) throw ConfigError("synth: parameters must be finite");
  }
  if (panel_noise < 0 || listings_noise < 0 || price_noise < 0 || reviews_spread < 0) {
    throw ConfigError("synth: noise and spread parameters must be >= 0");
  }
  if (reviews_mean - reviews_spread < 1.0) {
    throw ConfigError("synth: every neighborhood needs at least one review");
  }
  if (min_listings < 1) throw ConfigError("synth: min_listings must be >= 1");
}

namespace {

constexpr std::array<const char*, 14> kLocationWords{
    "subway", "walk",  "park",   "restaurant", "neighborhood", "area",   "station",
    "street", "cafe",  "market", "museum",     "beach",        "bakery", "garden"};

constexpr std::array<std::array<const char*, 10>, 3> kTopicWords{{
    {"key", "host", "arrival", "checkin", "instructions", "lockbox", "door", "message",
     "response", "keys"},
    {"bed", "bathroom", "kitchen", "towels", "shower", "sheets", "pillows", "closet", "window",
     "couch"},
    {"apartment", "building", "floor", "stairs", "elevator", "balcony", "hallway", "heating",
     "sofa", "pool"},
}};

constexpr std::array<const char*, 6> kPositive{"great",     "lovely",   "amazing",
                                               "perfect",   "wonderful", "excellent"};
constexpr std::array<const char*, 5> kNegative{"dirty", "noisy", "bad", "terrible", "awful"};

constexpr std::array<const char*, 4> kForeign{
    "Appartement très bien situé près du métro, nous avons adoré le séjour.",
    "El apartamento estaba muy limpio y cerca de todo, volveríamos sin duda.",
    "Die Wohnung war sehr sauber und die Lage ist gut, wir kommen wieder.",
    "La casa era molto bella e vicino alla stazione, tutto perfetto."};

template <std::size_t N>
const char* pick(Rng& rng, const std::array<const char*, N>& words) {
  return words[rng.below(N)];
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 32);
  return s;
}

std::string make_review(Rng& rng, double location_rate, double positive_rate) {
  const std::size_t topic = rng.below(kTopicWords.size());
  const std::size_t sentences = 1 + rng.below(3);
  std::string text;
  for (std::size_t s = 0; s < sentences; ++s) {
    const std::size_t n_words = 3 + rng.below(4);
    std::vector<std::string> words;
    for (std::size_t w = 0; w < n_words; ++w) {
      words.emplace_back(rng.uniform() < location_rate ? pick(rng, kLocationWords)
                                                       : pick(rng, kTopicWords[topic]));
    }
    const bool positive = rng.uniform() < positive_rate;
    const std::string sentiment = positive ? pick(rng, kPositive) : pick(rng, kNegative);
    const char* punct = rng.uniform() < 0.3 ? "!" : ".";
    std::string sentence;
    switch (rng.below(3)) {
      case 0:
        sentence = fmt::format("The {} was {}{}", fmt::join(words, " "), sentiment, punct);
        break;
      case 1:
        sentence = fmt::format("{} {} for the stay{}", capitalize(sentiment), fmt::join(words, " "),
                               punct);
        break;
      default:
        sentence = fmt::format("{} and {}{}", capitalize(fmt::format("{}", fmt::join(words, " "))),
                               sentiment, punct);
        break;
    }
    if (!text.empty()) text.push_back(' ');
    text += sentence;
  }
  return text;
}

Date random_date(Rng& rng, int year_lo, int year_hi) {
  using namespace std::chrono;
  const int year = year_lo + static_cast<int>(rng.below(static_cast<std::size_t>(year_hi - year_lo + 1)));
  const unsigned month = 1 + static_cast<unsigned>(rng.below(12));
  const unsigned day = 1 + static_cast<unsigned>(rng.below(28));
  return Date{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
}

SocioPanelRow panel_row(const std::string& id, Window w, double pos[5], bool with_race) {
  SocioPanelRow r;
  r.neighborhood_id = id;
  r.window = w;
  r.age = 30.0 + 20.0 * pos[0];
  r.education = 10.0 + 50.0 * pos[1];
  r.housing = 800.0 + 1500.0 * pos[2];
  r.income = 25000.0 + 80000.0 * pos[3];
  if (with_race) r.race = 20.0 + 60.0 * pos[4];
  return r;
}

}  // namespace

SynthCity generate_city(const SynthConfig& c) {
  c.validate();
  Rng rng(c.seed);
  SynthCity city;
  const std::size_t n = c.n_neighborhoods;
  const bool with_race = c.country == Country::us;

  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::shuffle(rank.begin(), rank.end(), rng.engine());

  std::size_t listing_seq = 0;
  std::size_t review_seq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = fmt::format("N{:04d}", i);
    const double u = (static_cast<double>(rank[i]) + 0.5) / static_cast<double>(n);
    double s = rng.normal(c.latent_mean, c.latent_sd);
    if (u > 0.5) s *= c.advantaged_change_scale;
    city.latent[id] = s;

    double prev[5], curr[5];
    for (int m = 0; m < 5; ++m) {
      prev[m] = u + rng.normal(0.0, c.panel_noise);
      curr[m] = u + s / 100.0 + rng.normal(0.0, c.panel_noise);
    }
    city.socio_prev.push_back(panel_row(id, Window::tw_minus_1, prev, with_race));
    city.socio_curr.push_back(panel_row(id, Window::tw, curr, with_race));

    const double expected = c.listings_base + c.listings_slope * s;
    const auto n_listings = static_cast<std::size_t>(std::max<double>(
        static_cast<double>(c.min_listings),
        std::round(expected + rng.normal(0.0, c.listings_noise))));
    std::vector<std::string> listing_ids;
    for (std::size_t l = 0; l < n_listings; ++l) {
      Listing li;
      li.listing_id = fmt::format("L{:06d}", listing_seq++);
      li.neighborhood_id = id;
      li.price = std::max(20.0, std::round(c.price_base + c.price_slope * s +
                                           rng.normal(0.0, c.price_noise)));
      li.bedrooms = static_cast<double>(1 + rng.below(3));
      if (rng.uniform() >= c.missing_star_rate) {
        li.star_rating = std::clamp(std::round((4.5 + rng.normal(0.0, 0.25)) * 10.0) / 10.0, 1.0, 5.0);
      }
      if (rng.uniform() >= c.missing_star_rate) {
        li.location_star_rating = std::clamp(std::round(9.0 + 0.02 * s + rng.normal(0.0, 0.5)), 1.0, 10.0);
      }
      for (const auto& name : known_subratings()) {
        li.subratings[name] = std::clamp(std::round(9.0 + rng.normal(0.0, 0.6)), 1.0, 10.0);
      }
      listing_ids.push_back(li.listing_id);
      city.listings.push_back(std::move(li));
    }

    const double loc_rate = std::clamp(c.location_rate_base + c.location_rate_slope * s, 0.01, 0.95);
    const double pos_rate = std::clamp(c.positive_rate_base + c.positive_rate_slope * s, 0.02, 0.98);
    const auto lo = static_cast<long>(std::round(c.reviews_mean - c.reviews_spread));
    const auto hi = static_cast<long>(std::round(c.reviews_mean + c.reviews_spread));
    const auto n_reviews = static_cast<std::size_t>(lo) + rng.below(static_cast<std::size_t>(hi - lo + 1));
    for (std::size_t r = 0; r < n_reviews; ++r) {
      Review rv;
      rv.review_id = fmt::format("R{:07d}", review_seq++);
      rv.listing_id = listing_ids[rng.below(listing_ids.size())];
      const double roll = rng.uniform();
      if (roll < c.foreign_review_rate) {
        rv.text = pick(rng, kForeign);
        rv.date = random_date(rng, 2013, 2017);
      } else if (roll < c.foreign_review_rate + c.out_of_window_rate) {
        rv.text = make_review(rng, loc_rate, pos_rate);
        rv.date = random_date(rng, 2011, 2012);
      } else {
        rv.text = make_review(rng, loc_rate, pos_rate);
        rv.date = random_date(rng, 2013, 2017);
      }
      city.reviews.push_back(std::move(rv));
    }
  }
  return city;
}

namespace {

std::string num(double v) { return fmt::format("{:.4f}", v); }

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  return out;
}

}  // namespace

std::vector<std::filesystem::path> write_city(const SynthCity& city,
                                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths{dir / "listings.csv", dir / "reviews.csv",
                                           dir / "socio_tw_minus_1.csv", dir / "socio_tw.csv",
                                           dir / "ground_truth.csv"};
  {
    auto out = open_out(paths[0]);
    csv::Writer w(out);
    std::vector<std::string> header{"listing_id", "neighborhood_id", "price", "bedrooms",
                                    "star_rating", "location_star_rating"};
    for (const auto& s : known_subratings()) header.push_back(s);
    w.row(header);
    for (const auto& l : city.listings) {
      std::vector<std::string> row{l.listing_id, l.neighborhood_id, num(l.price), num(l.bedrooms),
                                   l.star_rating ? num(*l.star_rating) : "",
                                   l.location_star_rating ? num(*l.location_star_rating) : ""};
      for (const auto& s : known_subratings()) {
        auto it = l.subratings.find(s);
        row.push_back(it == l.subratings.end() ? "" : num(it->second));
      }
      w.row(row);
    }
  }
  {
    auto out = open_out(paths[1]);
    csv::Writer w(out);
    w.row({"review_id", "listing_id", "date", "text"});
    for (const auto& r : city.reviews) w.row({r.review_id, r.listing_id, format_date(r.date), r.text});
  }
  auto socio = [&](const std::filesystem::path& p, const std::vector<SocioPanelRow>& rows) {
    auto out = open_out(p);
    csv::Writer w(out);
    const bool race = !rows.empty() && rows.front().race.has_value();
    std::vector<std::string> header{"neighborhood_id", "window", "age", "education", "housing",
                                    "income"};
    if (race) header.emplace_back("race");
    w.row(header);
    for (const auto& r : rows) {
      std::vector<std::string> row{r.neighborhood_id, std::string(to_string(r.window)), num(r.age),
                                   num(r.education), num(r.housing), num(r.income)};
      if (race) row.push_back(r.race ? num(*r.race) : "");
      w.row(row);
    }
  };
  socio(paths[2], city.socio_prev);
  socio(paths[3], city.socio_curr);
  {
    auto out = open_out(paths[4]);
    csv::Writer w(out);
    w.row({"neighborhood_id", "latent_score"});
    for (const auto& [id, s] : city.latent) w.row({id, fmt::format("{:.6f}", s)});
  }
  return paths;
}

}  // namespace gentricast

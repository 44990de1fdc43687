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

// Synthetic city with a planted gentrification signal.
//
// Every neighborhood gets an early-window position u on a [0, 1] grid and a
// latent score s ~ N(latent_mean, latent_sd), halved for neighborhoods with
// u > 0.5. Each socioeconomic measure in the late window sits at
// u + s / 100, each window adding independent panel noise, and is written
// through a fixed increasing map to plausible raw units. Because scoring
// only sees ranks, the computed score tracks s closely.
//
// Listing counts, the per-word probability of a location term and the
// probability of a positive sentence all move linearly with s. Review text
// comes from small closed vocabularies.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gentricast/corpus.hpp"
#include "gentricast/scoring.hpp"

namespace gentricast {

struct SynthConfig {
  std::size_t n_neighborhoods = 200;
  std::uint64_t seed = 0;
  Country country = Country::us;

  double latent_mean = 0.0;
  double latent_sd = 10.0;
  double advantaged_change_scale = 0.5;
  double panel_noise = 0.01;

  double listings_base = 12.0;
  double listings_slope = 0.3;
  double listings_noise = 1.5;
  std::size_t min_listings = 6;

  double reviews_mean = 40.0;
  double reviews_spread = 10.0;  // uniform +- around the mean

  double location_rate_base = 0.2;
  double location_rate_slope = 0.01;
  double positive_rate_base = 0.75;
  double positive_rate_slope = 0.01;

  double price_base = 100.0;
  double price_slope = 1.0;
  double price_noise = 15.0;

  double foreign_review_rate = 0.02;
  double out_of_window_rate = 0.02;
  double missing_star_rate = 0.05;

  /// Throws ConfigError.
  void validate() const;
};

struct SynthCity {
  std::vector<Listing> listings;
  std::vector<Review> reviews;
  std::vector<SocioPanelRow> socio_prev;
  std::vector<SocioPanelRow> socio_curr;
  std::map<std::string, double> latent;  // ground truth
};

SynthCity generate_city(const SynthConfig& config);

/// Writes listings.csv, reviews.csv, socio_tw_minus_1.csv, socio_tw.csv
/// and ground_truth.csv into `dir` (created if needed). Returns the paths.
std::vector<std::filesystem::path> write_city(const SynthCity& city,
                                              const std::filesystem::path& dir);

}  // namespace gentricast

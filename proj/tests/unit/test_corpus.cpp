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

#include <sstream>

#include "gentricast/corpus.hpp"
#include "gentricast/csv.hpp"
#include "gentricast/error.hpp"

using namespace gentricast;

namespace {

const char* kListings =
    "listing_id,neighborhood_id,price,bedrooms,star_rating,location_star_rating,cleanliness\n"
    "L1,A,$1,200.00,2,4.5,9,10\n"
    "L2,A,80,1,,,\n"
    "L3,B,90,1,6,9,\n"
    "L4,B,abc,1,4,9,\n";

Ingested<Listing> listings_from(const std::string& text, CorpusConfig cfg = {}) {
  std::istringstream in(text);
  return ingest_listings(in, "listings.csv", cfg);
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("csv handles quoting, embedded newlines and CRLF") {
    std::istringstream in("a,b\r\n\"x, y\",\"line1\nline2\"\r\n\"he said \"\"hi\"\"\",2\r\n");
    const auto t = csv::read(in, "t");
    REQUIRE(t.records.size() == 2);
    CHECK(t.records[0].fields[0] == "x, y");
    CHECK(t.records[0].fields[1] == "line1\nline2");
    CHECK(t.records[1].fields[0] == "he said \"hi\"");
    CHECK(t.records[1].line == 4);
  }

  TEST_CASE("csv escape round-trips") {
    std::ostringstream out;
    csv::Writer w(out);
    w.row({"plain", "with,comma", "with \"quote\"", "multi\nline"});
    std::istringstream in("h1,h2,h3,h4\n" + out.str());
    const auto t = csv::read(in, "t");
    REQUIRE(t.records.size() == 1);
    CHECK(t.records[0].fields == std::vector<std::string>{"plain", "with,comma", "with \"quote\"",
                                                           "multi\nline"});
  }

  TEST_CASE("listings: row-level errors are reported and the rest is kept") {
    // "$1,200.00" splits on the comma, so L1 has one field too many.
    const auto r = listings_from(kListings);
    CHECK(r.report.balanced());
    CHECK(r.report.rows == 4);
    CHECK(r.report.errors.size() == 3);
    REQUIRE(r.items.size() == 1);
    CHECK(r.items[0].listing_id == "L2");
    CHECK_FALSE(r.items[0].star_rating.has_value());
  }

  TEST_CASE("listings: currency symbols and thousands separators in quoted prices") {
    const auto r = listings_from(
        "listing_id,neighborhood_id,price,bedrooms,star_rating,location_star_rating\n"
        "L1,A,\"$1,200.00\",2,4.5,9\n",
        CorpusConfig{.currency_rate = 1.25});
    REQUIRE(r.items.size() == 1);
    CHECK(r.items[0].price == doctest::Approx(1500.0));
  }

  TEST_CASE("listings: missing required column throws SchemaError") {
    CHECK_THROWS_AS(listings_from("listing_id,neighborhood_id,price\nL1,A,3\n"), SchemaError);
  }

  TEST_CASE("reviews outside the window are filtered and counted") {
    std::istringstream in(
        "review_id,listing_id,date,text\n"
        "R1,L1,2012-12-31,too early\n"
        "R2,L1,2013-01-01,first day\n"
        "R3,L1,2017-12-31 23:59:00,last day\n"
        "R4,L1,2018-01-01,too late\n"
        "R5,L1,not-a-date,bad\n");
    const auto r = ingest_reviews(in, "reviews.csv", CorpusConfig{});
    CHECK(r.items.size() == 2);
    CHECK(r.report.filtered.at("outside_window") == 2);
    CHECK(r.report.errors.size() == 1);
    CHECK(r.report.balanced());
  }

  TEST_CASE("socio panel joins windows and flags one-sided neighborhoods") {
    std::istringstream a("neighborhood_id,age,education,housing,income\nA,1,2,3,4\nB,1,2,3,4\n");
    std::istringstream b("neighborhood_id,age,education,housing,income\nB,1,2,3,4\nC,1,2,3,4\n");
    const auto prev = ingest_socio(a, "a", Window::tw_minus_1);
    const auto curr = ingest_socio(b, "b", Window::tw);
    const auto panel = build_panel(prev.items, curr.items);
    CHECK(panel.usable == std::vector<std::string>{"B"});
    CHECK(panel.flagged == std::vector<std::string>{"A", "C"});
  }

  TEST_CASE("socio: duplicate neighborhood ids throw") {
    std::istringstream a("neighborhood_id,age,education,housing,income\nA,1,2,3,4\nA,1,2,3,4\n");
    CHECK_THROWS_AS(ingest_socio(a, "a", Window::tw), IngestError);
  }

  TEST_CASE("language filter: declared tags win, detection otherwise") {
    std::vector<Review> rs(4);
    rs[0].text = "Die Wohnung war sehr sauber und die Lage ist gut";
    rs[1].text = "The apartment was clean and the host was very kind";
    rs[2].text = "anything";
    rs[2].language = "en-GB";
    rs[3].text = "";
    const auto out = filter_language(rs, "en");
    CHECK(out.retained.size() == 2);
    CHECK(out.excluded_other_language == 1);
    CHECK(out.excluded_undetectable == 1);
  }

  TEST_CASE("neighborhood filter: threshold on listing counts is inclusive") {
    std::vector<Listing> ls;
    for (int i = 0; i < 5; ++i) ls.push_back({"A" + std::to_string(i), "A", 1, 1, {}, {}, {}});
    for (int i = 0; i < 4; ++i) ls.push_back({"B" + std::to_string(i), "B", 1, 1, {}, {}, {}});
    const auto act = filter_neighborhoods(ls, {}, CorpusConfig{});
    CHECK(act.active == std::set<std::string>{"A"});
    CHECK(act.removed == std::set<std::string>{"B"});
    CHECK(restrict_listings(ls, act.active).size() == 5);
  }

  TEST_CASE("dates parse and format") {
    const auto d = parse_date("2015-02-28T10:00:00Z");
    REQUIRE(d);
    CHECK(format_date(*d) == "2015-02-28");
    CHECK_FALSE(parse_date("2015-02-30"));
    CHECK_FALSE(parse_date("15-02-01"));
  }
}

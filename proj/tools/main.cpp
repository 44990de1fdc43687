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


#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "gentricast/cli/commands.hpp"
#include "gentricast/cli/config.hpp"
#include "gentricast/error.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string city;
  std::string target;
  std::string feature_set;
  std::optional<std::size_t> neighborhoods;
  std::optional<std::size_t> threads;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config,-c", f.config, "JSON config file");
  sub->add_option("--seed", f.seed, "master seed (overrides seed)");
  sub->add_option("--out,-o", f.out, "output directory (overrides out)");
  sub->add_option("--city", f.city, "city label (overrides city)");
  sub->add_option("--target", f.target, "equal4, race5 or a single measure (overrides scoring.target)");
  sub->add_option("--feature-set", f.feature_set,
                  "structured, unstructured or all (overrides features.set)");
  sub->add_option("--threads", f.threads, "worker threads (overrides threads)");
  sub->add_option("--set", f.sets, "override any config key: key.path=value")->take_all();
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neighborhood gentrification signals from short-term rental data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gentricast 0.1.0");
  Flags flags;
  std::vector<std::pair<std::string, CLI::App*>> subs;
  const std::vector<std::pair<std::string, std::string>> help{
      {"ingest", "validate and summarize the inputs"},
      {"score", "compute gentrification scores"},
      {"featurize", "fit text models and build the feature matrix"},
      {"fit", "fit OLS and a random forest on the full matrix"},
      {"evaluate", "in- and out-of-sample evaluation"},
      {"report", "run everything and write report.md"},
      {"synth", "generate a synthetic city"}};
  for (const auto& [name, text] : help) {
    auto* sub = app.add_subcommand(name, text);
    add_common(sub, flags);
    if (name == "synth") {
      sub->add_option("--neighborhoods", flags.neighborhoods,
                      "neighborhood count (overrides synth.n_neighborhoods)");
    }
    subs.emplace_back(name, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gentricast::cli::kConfig;
  }

  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) command = name;
  }

  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& s : flags.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      fmt::print(stderr, "gentricast: --set expects key=value, got '{}'\n", s);
      return gentricast::cli::kConfig;
    }
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (flags.seed) overrides.emplace_back("seed", std::to_string(*flags.seed));
  if (!flags.out.empty()) overrides.emplace_back("out", json_string(flags.out));
  if (!flags.city.empty()) overrides.emplace_back("city", json_string(flags.city));
  if (!flags.target.empty()) overrides.emplace_back("scoring.target", json_string(flags.target));
  if (!flags.feature_set.empty()) {
    overrides.emplace_back("features.set", json_string(flags.feature_set));
  }
  if (flags.threads) overrides.emplace_back("threads", std::to_string(*flags.threads));
  if (flags.neighborhoods) {
    overrides.emplace_back("synth.n_neighborhoods", std::to_string(*flags.neighborhoods));
  }

  gentricast::cli::RunConfig cfg;
  try {
    std::optional<std::filesystem::path> file;
    if (!flags.config.empty()) file = flags.config;
    cfg = gentricast::cli::load_config(file, overrides);
  } catch (const std::exception& e) {
    fmt::print(stderr, "gentricast: config error: {}\n", e.what());
    return gentricast::cli::exit_code_for(e);
  }
  return gentricast::cli::run_command(command, cfg);
}

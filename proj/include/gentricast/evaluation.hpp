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

// In-sample and out-of-sample evaluation of the score models.
//
// In sample: OLS fitted and scored on every row, per feature set.
// Out of sample: `n_sims` random train/test splits; simulation i draws its
// split from derive_seed(master_seed, i) and the forest for feature set s
// is seeded with derive_seed(that seed, s + 1). The predict-zero baseline
// is scored on the same test rows. Simulations may run on several threads;
// results are reduced in simulation order so the report is identical for
// any thread count.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gentricast/features.hpp"
#include "gentricast/forest.hpp"

namespace gentricast {

struct EvaluationProtocol {
  std::size_t n_sims = 100;
  double train_fraction = 0.5;
  std::uint64_t master_seed = 0;
  std::size_t threads = 1;
  ForestParams forest;

  /// Throws ConfigError.
  void validate() const;
};

struct SetEvaluation {
  FeatureSet set = FeatureSet::all;
  std::size_t n_columns = 0;
  double ols_in_sample_rmse = 0.0;
  bool ols_rank_deficient = false;
  double rf_oos_mean = 0.0;
  double rf_oos_sd = 0.0;
  std::vector<double> rf_oos_by_sim;
};

struct EvaluationReport {
  std::uint64_t master_seed = 0;
  std::size_t n_sims = 0;
  std::size_t n_rows = 0;
  std::size_t n_train = 0;
  double baseline_in_sample = 0.0;
  double baseline_oos_mean = 0.0;
  double baseline_oos_sd = 0.0;
  std::vector<SetEvaluation> sets;  // structured, unstructured, all
  std::vector<std::pair<std::string, double>> mdi_all;  // column order, percentages

  const SetEvaluation& get(FeatureSet s) const;
};

/// `m` must hold every column (the "all" set). Throws ComputeError when
/// there are fewer than 4 rows or a split leaves fewer than 2 rows on a side.
EvaluationReport evaluate(const DesignMatrix& m, const EvaluationProtocol& protocol);

struct QuartileContrast {
  double upper_mean = 0.0;
  double lower_mean = 0.0;
  double t = 0.0;
  double p_value = 1.0;
  std::size_t n_upper = 0;  // pooled observations
  std::size_t n_lower = 0;
  std::size_t neighborhoods_upper = 0;
  std::size_t neighborhoods_lower = 0;
};

/// Pools the per-review values of neighborhoods whose score has Hazen
/// percentile >= 75 (upper) and <= 25 (lower) and compares the two pools
/// with Welch's t-test. Throws ComputeError with fewer than 4 scored
/// neighborhoods or fewer than 2 pooled values in a group.
QuartileContrast quartile_contrast(const std::map<std::string, double>& scores,
                                   const std::map<std::string, std::vector<double>>& values);

}  // namespace gentricast

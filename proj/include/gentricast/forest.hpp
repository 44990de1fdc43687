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

// Random forest regression: bootstrap-aggregated CART trees split on
// weighted variance reduction.
//
// At each node the features are visited in a random order until `mtry`
// features that vary within the node have been evaluated. Thresholds are
// midpoints between consecutive distinct values; x <= threshold goes left.
//
// Importance is mean decrease in impurity: every split credits its feature
// with N_node * var_node - N_left * var_left - N_right * var_right
// (bootstrap-weighted sample counts). Each tree's credits are normalised
// to sum to one, averaged over trees and reported as percentages.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gentricast/ols.hpp"

namespace gentricast {

struct ForestParams {
  std::size_t n_trees = 100;
  std::optional<std::size_t> mtry;  // default max(1, floor(p / 3))
  std::size_t min_samples_leaf = 1;
  bool bootstrap = true;
  std::optional<std::size_t> max_depth;
  std::uint64_t seed = 0;

  std::size_t mtry_for(std::size_t p) const;
  /// Throws ConfigError.
  void validate() const;
};

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double value = 0.0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;
  double predict(std::span<const double> x) const;
};

struct RandomForest {
  ForestParams params;
  std::size_t n_features = 0;
  std::vector<RegressionTree> trees;
  std::vector<double> importance;  // percentages, sum to 100

  double predict(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& x) const;
};

/// Throws ComputeError on empty or ragged input.
RandomForest rf_fit(const Matrix& x, std::span<const double> y, const ForestParams& params);

/// The forest's MDI percentages. A forest without any split (constant
/// target) reports equal shares.
std::vector<double> mdi_importance(const RandomForest& forest);

}  // namespace gentricast

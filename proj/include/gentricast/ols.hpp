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

#include <cstddef>
#include <span>
#include <vector>

namespace gentricast {

using Matrix = std::vector<std::vector<double>>;  // row-major, one row per observation

struct OlsModel {
  double intercept = 0.0;
  std::vector<double> coef;
  std::size_t rank = 0;          // of [1 | X]
  bool rank_deficient = false;   // minimum-norm solution was used
};

/// Least squares with an intercept. Rank-deficient designs get the
/// minimum-norm solution. Throws ComputeError on empty or ragged input.
OlsModel ols_fit(const Matrix& x, std::span<const double> y);

std::vector<double> ols_predict(const OlsModel& model, const Matrix& x);

/// RMSE of the constant-zero predictor: sqrt(mean(y^2)). Throws on empty y.
double baseline_rmse(std::span<const double> y);

}  // namespace gentricast

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

#include "gentricast/ols.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "gentricast/error.hpp"
#include "gentricast/simd/kernels.hpp"

namespace gentricast {

OlsModel ols_fit(const Matrix& x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw ComputeError("ols: empty data");
  if (x.size() != y.size()) throw ComputeError("ols: rows of X differ from length of y");
  const std::size_t n = x.size();
  const std::size_t p = x.front().size();
  Eigen::MatrixXd a(n, p + 1);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != p) throw ComputeError("ols: ragged design matrix");
    a(i, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) a(i, j + 1) = x[i][j];
    b(i) = y[i];
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const Eigen::VectorXd beta = cod.solve(b);
  OlsModel m;
  m.rank = static_cast<std::size_t>(cod.rank());
  m.rank_deficient = m.rank < p + 1;
  m.intercept = beta(0);
  m.coef.resize(p);
  for (std::size_t j = 0; j < p; ++j) m.coef[j] = beta(j + 1);
  return m;
}

std::vector<double> ols_predict(const OlsModel& model, const Matrix& x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) {
    if (row.size() != model.coef.size()) throw ComputeError("ols: column count mismatch");
    out.push_back(model.intercept +
                  simd::dot(std::span<const double>(row), std::span<const double>(model.coef)));
  }
  return out;
}

double baseline_rmse(std::span<const double> y) {
  if (y.empty()) throw ComputeError("baseline_rmse: empty input");
  return std::sqrt(simd::dot(y, y) / static_cast<double>(y.size()));
}

}  // namespace gentricast

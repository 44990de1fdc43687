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

// Descriptive statistics and the two hypothesis tests used by the study:
// Pearson correlation with a t-based p-value, and Welch's two-sample t-test.
// p-values come from the exact Student t CDF.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gentricast::stats {

double mean(std::span<const double> x);
/// Midpoint of the two central order statistics for even n.
double median(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); 0 for n < 2.
double sample_sd(std::span<const double> x);
double sample_variance(std::span<const double> x);

/// Two-sided p-value of a t statistic with `dof` degrees of freedom.
double t_two_sided_p(double t, double dof);

struct CorrelationResult {
  std::optional<double> r;        // missing when either input is constant
  std::optional<double> p_value;
  std::size_t n = 0;

  /// "***" p<0.01, "**" p<0.05, "*" p<0.1, "" otherwise.
  std::string stars() const;
};

/// Throws ComputeError on length mismatch or n < 3.
CorrelationResult pearson_r(std::span<const double> x, std::span<const double> y);

/// Column-wise correlation matrix of `columns` (each column a vector of
/// equal length). Symmetric with unit diagonal; constant columns give
/// missing off-diagonal entries.
std::vector<std::vector<CorrelationResult>> correlation_matrix(
    const std::vector<std::vector<double>>& columns);

struct TTestResult {
  double t = 0.0;
  double p_value = 1.0;
  double dof = 0.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
};

/// Welch's unequal-variance t-test, two-sided. Each sample needs n >= 2.
/// Both samples constant: equal means give t = 0, p = 1; different means
/// give t = +-inf, p = 0.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// sqrt(mean((a - b)^2))
double rmse(std::span<const double> predicted, std::span<const double> actual);

}  // namespace gentricast::stats

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

#include "gentricast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "gentricast/error.hpp"
#include "gentricast/simd/kernels.hpp"

namespace gentricast::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw ComputeError("mean of empty sample");
  return simd::sum(x) / static_cast<double>(x.size());
}

double median(std::span<const double> x) {
  if (x.empty()) throw ComputeError("median of empty sample");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  return simd::sum_sq_dev(x, mean(x)) / static_cast<double>(x.size() - 1);
}

double sample_sd(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

double t_two_sided_p(double t, double dof) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  boost::math::students_t dist(dof);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))), 0.0, 1.0);
}

std::string CorrelationResult::stars() const {
  if (!p_value) return "";
  if (*p_value < 0.01) return "***";
  if (*p_value < 0.05) return "**";
  if (*p_value < 0.1) return "*";
  return "";
}

CorrelationResult pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ComputeError("pearson_r: length mismatch");
  if (x.size() < 3) throw ComputeError("pearson_r: need at least 3 observations");
  CorrelationResult out;
  out.n = x.size();
  const double mx = mean(x);
  const double my = mean(y);
  std::vector<double> dx(x.size()), dy(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    dx[i] = x[i] - mx;
    dy[i] = y[i] - my;
  }
  const double sxx = simd::dot(std::span<const double>(dx), std::span<const double>(dx));
  const double syy = simd::dot(std::span<const double>(dy), std::span<const double>(dy));
  if (sxx == 0.0 || syy == 0.0) return out;
  const double sxy = simd::dot(std::span<const double>(dx), std::span<const double>(dy));
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  out.r = r;
  const double dof = static_cast<double>(out.n - 2);
  if (std::fabs(r) >= 1.0) {
    out.p_value = 0.0;
  } else {
    const double t = r * std::sqrt(dof / (1.0 - r * r));
    out.p_value = t_two_sided_p(t, dof);
  }
  return out;
}

std::vector<std::vector<CorrelationResult>> correlation_matrix(
    const std::vector<std::vector<double>>& columns) {
  const std::size_t p = columns.size();
  std::vector<std::vector<CorrelationResult>> m(p, std::vector<CorrelationResult>(p));
  for (std::size_t i = 0; i < p; ++i) {
    m[i][i].n = columns[i].size();
    m[i][i].r = 1.0;
    m[i][i].p_value = 0.0;
    for (std::size_t j = i + 1; j < p; ++j) {
      m[i][j] = pearson_r(columns[i], columns[j]);
      m[j][i] = m[i][j];
    }
  }
  return m;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw ComputeError("welch_t_test: each sample needs n >= 2");
  TTestResult out;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  out.mean_a = mean(a);
  out.mean_b = mean(b);
  const double va = sample_variance(a);
  const double vb = sample_variance(b);
  const double se2 = va / na + vb / nb;
  const double diff = out.mean_a - out.mean_b;
  if (se2 == 0.0) {
    if (diff == 0.0) {
      out.t = 0.0;
      out.p_value = 1.0;
    } else {
      out.t = diff > 0 ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
      out.p_value = 0.0;
    }
    out.dof = na + nb - 2.0;
    return out;
  }
  out.t = diff / std::sqrt(se2);
  const double qa = va / na;
  const double qb = vb / nb;
  out.dof = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  out.p_value = t_two_sided_p(out.t, out.dof);
  return out;
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size()) throw ComputeError("rmse: length mismatch");
  if (predicted.empty()) throw ComputeError("rmse: empty input");
  return std::sqrt(simd::sum_sq_diff(predicted, actual) / static_cast<double>(predicted.size()));
}

}  // namespace gentricast::stats

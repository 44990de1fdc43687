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

// Independent reference implementations used as test oracles. They favour
// the most direct formula over speed and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Average rank by counting strictly smaller and equal values.
inline std::vector<double> hazen_percentiles(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (v[j] < v[i]) ++less;
      if (v[j] == v[i]) ++equal;
    }
    const double avg_rank = static_cast<double>(less) + (static_cast<double>(equal) + 1.0) / 2.0;
    out[i] = 100.0 * (avg_rank - 0.5) / static_cast<double>(n);
  }
  return out;
}

inline double mean(const std::vector<double>& x) {
  long double s = 0;
  for (double v : x) s += v;
  return static_cast<double>(s / static_cast<long double>(x.size()));
}

inline double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

inline double variance(const std::vector<double>& x) {
  const long double m = mean(x);
  long double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return static_cast<double>(s / static_cast<long double>(x.size() - 1));
}

inline double sd(const std::vector<double>& x) { return std::sqrt(variance(x)); }

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const long double mx = mean(x), my = mean(y);
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

/// Continued fraction for the regularized incomplete beta function.
inline double beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((a - 1.0 + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + 1.0 + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h;
}

inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                    b * std::log(1.0 - x);
  const double front = std::exp(ln);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

/// Two-sided Student t p-value.
inline double t_p_value(double t, double dof) {
  return incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

struct Welch {
  double t;
  double dof;
  double p;
};

inline Welch welch(const std::vector<double>& a, const std::vector<double>& b) {
  const double va = variance(a) / static_cast<double>(a.size());
  const double vb = variance(b) / static_cast<double>(b.size());
  const double t = (mean(a) - mean(b)) / std::sqrt(va + vb);
  const double dof = (va + vb) * (va + vb) /
                     (va * va / static_cast<double>(a.size() - 1) +
                      vb * vb / static_cast<double>(b.size() - 1));
  return {t, dof, t_p_value(t, dof)};
}

/// Solves (Z'Z) beta = Z'y with Z = [1 | X] by Gaussian elimination with
/// partial pivoting in extended precision. Returns {intercept, coef...}.
inline std::vector<double> ols_normal_equations(const std::vector<std::vector<double>>& x,
                                                const std::vector<double>& y) {
  const std::size_t n = x.size();
  const std::size_t q = x.front().size() + 1;
  std::vector<std::vector<long double>> a(q, std::vector<long double>(q + 1, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<long double> z{1.0L};
    for (double v : x[i]) z.push_back(v);
    for (std::size_t r = 0; r < q; ++r) {
      for (std::size_t c = 0; c < q; ++c) a[r][c] += z[r] * z[c];
      a[r][q] += z[r] * y[i];
    }
  }
  for (std::size_t col = 0; col < q; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < q; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (std::fabs(a[piv][col]) < 1e-300L) throw std::runtime_error("singular normal equations");
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < q; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= q; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> beta(q);
  for (std::size_t r = 0; r < q; ++r) beta[r] = static_cast<double>(a[r][q] / a[r][r]);
  return beta;
}

inline double rmse(const std::vector<double>& p, const std::vector<double>& y) {
  long double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - y[i]) * (p[i] - y[i]);
  return static_cast<double>(std::sqrt(s / static_cast<long double>(p.size())));
}

/// Best single split by exhaustive search over midpoints: returns the
/// smallest total within-child sum of squares.
inline double best_split_sse(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                             std::size_t min_leaf = 1) {
  double best = INFINITY;
  for (std::size_t f = 0; f < x.front().size(); ++f) {
    std::vector<double> vals;
    for (const auto& r : x) vals.push_back(r[f]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      const double t = 0.5 * (vals[k] + vals[k + 1]);
      std::vector<double> l, r;
      for (std::size_t i = 0; i < y.size(); ++i) (x[i][f] <= t ? l : r).push_back(y[i]);
      if (l.size() < min_leaf || r.size() < min_leaf) continue;
      auto sse = [](const std::vector<double>& v) {
        const double m = mean(v);
        double s = 0;
        for (double a : v) s += (a - m) * (a - m);
        return s;
      };
      best = std::min(best, sse(l) + sse(r));
    }
  }
  return best;
}

}  // namespace oracle

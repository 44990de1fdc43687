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


#include "gentricast/cli/svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gentricast/error.hpp"

namespace gentricast::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string open(const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, escape_xml(title));
}

std::string axes(const std::string& x_label, const std::string& y_label) {
  std::string s = fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n",
      kLeft, kTop + kPlotH, kLeft + kPlotW, kTop);
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                   kLeft + kPlotW / 2, kHeight - 15, escape_xml(x_label));
  s += fmt::format(
      "<text x=\"18\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.1f})\">{1}</text>\n",
      kTop + kPlotH / 2, escape_xml(y_label));
  return s;
}

struct Scale {
  double lo;
  double hi;
  double px_lo;
  double px_hi;
  double operator()(double v) const {
    if (hi == lo) return 0.5 * (px_lo + px_hi);
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

std::string tick_labels_y(const Scale& y) {
  std::string s;
  for (int i = 0; i <= 4; ++i) {
    const double v = y.lo + (y.hi - y.lo) * i / 4.0;
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n",
                     kLeft - 6, y(v) + 4, v);
  }
  return s;
}

std::string tick_labels_x(const Scale& x) {
  std::string s;
  for (int i = 0; i <= 4; ++i) {
    const double v = x.lo + (x.hi - x.lo) * i / 4.0;
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.3g}</text>\n",
                     x(v), kTop + kPlotH + 16, v);
  }
  return s;
}

std::pair<double, double> range(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 1.0};
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

}  // namespace

std::vector<HistogramBin> histogram_bins(const std::vector<double>& values, std::size_t bins) {
  if (bins == 0) throw ComputeError("histogram: need at least one bin");
  if (values.empty()) return {};
  const auto [lo, hi] = range(values);
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lo = lo + width * static_cast<double>(b);
    out[b].hi = b + 1 == bins ? std::max(hi, lo + width) : lo + width * static_cast<double>(b + 1);
  }
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    out[std::min(b, bins - 1)].count++;
  }
  return out;
}

std::string histogram_svg(const std::vector<HistogramBin>& bins, const std::string& title,
                          const std::string& x_label) {
  std::string s = open(title);
  std::size_t max_count = 1;
  for (const auto& b : bins) max_count = std::max(max_count, b.count);
  const Scale x{bins.empty() ? 0.0 : bins.front().lo, bins.empty() ? 1.0 : bins.back().hi, kLeft,
                kLeft + kPlotW};
  const Scale y{0.0, static_cast<double>(max_count), kTop + kPlotH, kTop};
  for (const auto& b : bins) {
    const double x0 = x(b.lo), x1 = x(b.hi), y0 = y(static_cast<double>(b.count));
    s += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#4a78b5\" "
        "stroke=\"white\"/>\n",
        x0, y0, std::max(0.0, x1 - x0), kTop + kPlotH - y0);
  }
  s += axes(x_label, "neighborhoods");
  s += tick_labels_x(x);
  s += tick_labels_y(y);
  s += "</svg>\n";
  return s;
}

std::string bar_svg(const std::vector<std::string>& labels, const std::vector<double>& values,
                    const std::vector<double>& errors, const std::string& title,
                    const std::string& y_label) {
  if (labels.size() != values.size() || (!errors.empty() && errors.size() != values.size())) {
    throw ComputeError("bar chart: labels, values and errors differ in length");
  }
  std::string s = open(title);
  double top = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    top = std::max(top, values[i] + (errors.empty() ? 0.0 : errors[i]));
  }
  if (top <= 0.0) top = 1.0;
  const Scale y{0.0, top * 1.1, kTop + kPlotH, kTop};
  const double slot = values.empty() ? kPlotW : kPlotW / static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
    const double yv = y(std::max(0.0, values[i]));
    s += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#4a78b5\"/>\n",
        cx - slot * 0.3, yv, slot * 0.6, kTop + kPlotH - yv);
    if (!errors.empty()) {
      const double a = y(std::max(0.0, values[i] - errors[i])), b = y(values[i] + errors[i]);
      s += fmt::format(
          "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
          cx, a, b);
    }
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", cx,
                     kTop + kPlotH + 16, escape_xml(labels[i]));
  }
  s += axes("", y_label);
  s += tick_labels_y(y);
  s += "</svg>\n";
  return s;
}

std::string scatter_svg(const std::vector<double>& x, const std::vector<double>& y,
                        const std::optional<std::vector<double>>& color, const std::string& title,
                        const std::string& x_label, const std::string& y_label) {
  if (x.size() != y.size() || (color && color->size() != x.size())) {
    throw ComputeError("scatter: series differ in length");
  }
  std::string s = open(title);
  const auto [xl, xh] = range(x);
  const auto [yl, yh] = range(y);
  const Scale sx{xl, xh, kLeft + 5, kLeft + kPlotW - 5};
  const Scale sy{yl, yh, kTop + kPlotH - 5, kTop + 5};
  std::pair<double, double> cr{0.0, 1.0};
  if (color) cr = range(*color);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::string fill = "#4a78b5";
    if (color) {
      const double t = cr.second > cr.first ? ((*color)[i] - cr.first) / (cr.second - cr.first) : 0.5;
      const int r = static_cast<int>(std::lround(40 + 200 * t));
      const int b = static_cast<int>(std::lround(240 - 200 * t));
      fill = fmt::format("#{:02x}50{:02x}", r, b);
    }
    s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.8\"/>\n",
                     sx(x[i]), sy(y[i]), fill);
  }
  s += axes(x_label, y_label);
  s += tick_labels_x(Scale{xl, xh, kLeft + 5, kLeft + kPlotW - 5});
  s += tick_labels_y(sy);
  s += "</svg>\n";
  return s;
}

}  // namespace gentricast::cli

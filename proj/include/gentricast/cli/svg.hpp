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

// Minimal deterministic SVG charts. Each chart is also written as CSV by
// the caller so results stay testable without image parsing.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace gentricast::cli {

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

/// Equal-width bins over [min, max]; the last bin is closed.
std::vector<HistogramBin> histogram_bins(const std::vector<double>& values, std::size_t bins);

std::string histogram_svg(const std::vector<HistogramBin>& bins, const std::string& title,
                          const std::string& x_label);

/// Bars with optional symmetric error whiskers.
std::string bar_svg(const std::vector<std::string>& labels, const std::vector<double>& values,
                    const std::vector<double>& errors, const std::string& title,
                    const std::string& y_label);

/// Points coloured on a blue-red ramp by `color` when given.
std::string scatter_svg(const std::vector<double>& x, const std::vector<double>& y,
                        const std::optional<std::vector<double>>& color, const std::string& title,
                        const std::string& x_label, const std::string& y_label);

}  // namespace gentricast::cli

// Copyright 2026 The groundcheck Authors
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

#include <algorithm>
#include <cmath>

#include "groundcheck/error.hpp"
#include "groundcheck/stats.hpp"

namespace groundcheck {

DistributionStats distribution_stats(std::span<const double> samples, std::size_t bins) {
  if (bins == 0) raise(ErrorCode::kConfig, "histogram needs at least one bin");
  DistributionStats st;
  st.n = samples.size();

  const double span = kHistogramHigh - kHistogramLow;
  const double width = span / static_cast<double>(bins);
  st.histogram.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    st.histogram[b].lower = kHistogramLow + span * static_cast<double>(b) / static_cast<double>(bins);
    st.histogram[b].upper = kHistogramLow + span * static_cast<double>(b + 1) / static_cast<double>(bins);
  }
  if (st.n == 0) return st;

  double sum = 0.0;
  for (double x : samples) sum += x;
  st.mean = sum / static_cast<double>(st.n);

  double m2 = 0.0;
  double m4 = 0.0;
  std::vector<std::size_t> counts(bins, 0);
  for (double x : samples) {
    const double d = x - st.mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
    const double pos = std::floor((x - kHistogramLow) / width);
    const auto b = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    ++counts[b];
  }
  m2 /= static_cast<double>(st.n);
  m4 /= static_cast<double>(st.n);
  st.variance = m2;
  if (st.n >= 4 && m2 > 0.0) st.excess_kurtosis = m4 / (m2 * m2) - 3.0;

  for (std::size_t b = 0; b < bins; ++b) {
    const double w = st.histogram[b].upper - st.histogram[b].lower;
    st.histogram[b].density = static_cast<double>(counts[b]) / (static_cast<double>(st.n) * w);
  }
  return st;
}

double overlap_coefficient(const DistributionStats& a, const DistributionStats& b) {
  if (a.histogram.size() != b.histogram.size()) {
    raise(ErrorCode::kBin, "bin counts differ: " + std::to_string(a.histogram.size()) + " vs " +
                               std::to_string(b.histogram.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.histogram.size(); ++i) {
    if (a.histogram[i].lower != b.histogram[i].lower || a.histogram[i].upper != b.histogram[i].upper) {
      raise(ErrorCode::kBin, "bin edges differ at bin " + std::to_string(i));
    }
    total += std::min(a.mass(i), b.mass(i));
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace groundcheck

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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace groundcheck {

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  double density = 0.0;

  friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

struct DistributionStats {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // population second central moment
  // Absent when n < 4 or the variance is zero.
  std::optional<double> excess_kurtosis;
  std::vector<HistogramBin> histogram;  // equal-width bins over [-1, 1]

  double mass(std::size_t bin) const {
    const auto& b = histogram[bin];
    return b.density * (b.upper - b.lower);
  }

  friend bool operator==(const DistributionStats&, const DistributionStats&) = default;
};

inline constexpr std::size_t kDefaultBins = 40;
inline constexpr double kHistogramLow = -1.0;
inline constexpr double kHistogramHigh = 1.0;

DistributionStats distribution_stats(std::span<const double> samples, std::size_t bins = kDefaultBins);

/// Histogram intersection: sum over bins of min(mass_a, mass_b). Throws
/// BinError when the bin layouts differ.
double overlap_coefficient(const DistributionStats& a, const DistributionStats& b);

}  // namespace groundcheck

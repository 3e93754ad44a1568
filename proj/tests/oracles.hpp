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

// Independent reference implementations used only to check the library.
// They favour obviousness over speed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "groundcheck/simsearch.hpp"

namespace oracle {

// Same precision pipeline as the library: float storage, double accumulation.
inline double dot(const groundcheck::EmbeddingStore& a, std::size_t i, const groundcheck::EmbeddingStore& b,
                  std::size_t j) {
  const auto u = a.vector(i);
  const auto v = b.vector(j);
  double s = 0.0;
  for (std::size_t d = 0; d < u.size(); ++d) s += static_cast<double>(u[d]) * static_cast<double>(v[d]);
  return std::clamp(s, -1.0, 1.0);
}

// Scores every target, then keeps the k best by (similarity desc, id asc).
inline std::vector<groundcheck::NeighborList> naive_top_k(const groundcheck::EmbeddingStore& queries,
                                                          const groundcheck::EmbeddingStore& targets, std::size_t k,
                                                          bool include_self) {
  std::vector<groundcheck::NeighborList> out;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    std::vector<groundcheck::Neighbor> all;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (!include_self && targets.ids()[t] == queries.ids()[q]) continue;
      all.push_back({targets.ids()[t], dot(queries, q, targets, t)});
    }
    const std::size_t keep = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                      [](const auto& x, const auto& y) {
                        if (x.similarity != y.similarity) return x.similarity > y.similarity;
                        return x.id < y.id;
                      });
    all.resize(keep);
    out.push_back({queries.ids()[q], all});
  }
  return out;
}

// Average linkage recomputed from all member pairs at every step.
inline std::vector<std::vector<std::string>> naive_average_linkage(const groundcheck::EmbeddingStore& emb,
                                                                   std::vector<std::string> ids, double tau) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::size_t> rows;
  for (const auto& id : ids) rows.push_back(*emb.index_of(id));
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < ids.size(); ++i) clusters.push_back({i});

  auto linkage = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    double s = 0.0;
    for (auto i : a)
      for (auto j : b) s += 1.0 - dot(emb, rows[i], emb, rows[j]);
    return s / static_cast<double>(a.size() * b.size());
  };
  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double d = linkage(clusters[i], clusters[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (clusters.size() < 2 || best > 1.0 - tau) break;
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  std::vector<std::vector<std::string>> out;
  for (auto& c : clusters) {
    std::vector<std::string> names;
    for (auto i : c) names.push_back(ids[i]);
    std::sort(names.begin(), names.end());
    out.push_back(names);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double excess_kurtosis = 0.0;
};

// Two-pass population moments in long double.
inline Moments moments(const std::vector<double>& xs) {
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  const long double mean = sum / static_cast<long double>(xs.size());
  long double m2 = 0.0L, m4 = 0.0L;
  for (double x : xs) {
    const long double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<long double>(xs.size());
  m4 /= static_cast<long double>(xs.size());
  return {static_cast<double>(mean), static_cast<double>(m2), static_cast<double>(m4 / (m2 * m2) - 3.0L)};
}

// Pearson statistic of observed counts against a uniform expectation.
inline double chi_square_uniform(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double chi = 0.0;
  for (auto c : counts) chi += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return chi;
}

// Random unit-ish vectors, row-major, for building stores.
inline std::vector<double> gaussian_rows(std::mt19937_64& rng, std::size_t rows, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> data(rows * dim);
  for (auto& x : data) x = normal(rng);
  return data;
}

inline std::vector<std::string> make_ids(const std::string& prefix, std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
  return ids;
}

}  // namespace oracle

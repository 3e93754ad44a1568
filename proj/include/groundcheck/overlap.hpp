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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "groundcheck/corpus.hpp"
#include "groundcheck/simsearch.hpp"
#include "groundcheck/stats.hpp"

namespace groundcheck {

struct SplitPair {
  Split source = Split::kValidation;
  Split target = Split::kTrain;

  friend bool operator==(const SplitPair&, const SplitPair&) = default;
};

struct FlaggedPair {
  std::string query_id;
  std::string neighbor_id;
  double similarity = 0.0;

  friend bool operator==(const FlaggedPair&, const FlaggedPair&) = default;
};

/// Leakage scan of one split against another. per_k_stats[k] summarizes the
/// k-th best neighbour similarity of every query that has at least k neighbours.
struct OverlapReport {
  SplitPair pair;
  std::size_t k = 0;
  double tau_flag = 0.0;
  std::size_t num_queries = 0;
  std::map<std::size_t, DistributionStats> per_k_stats;
  std::vector<FlaggedPair> flagged;
  double flagged_fraction = 0.0;

  friend bool operator==(const OverlapReport&, const OverlapReport&) = default;
};

inline constexpr double kDefaultTauFlag = 0.9;
inline constexpr double kDefaultTauCluster = 0.9;
inline constexpr std::size_t kDefaultK = 3;

struct ScanOptions {
  std::size_t k = kDefaultK;
  double tau_flag = kDefaultTauFlag;
  std::size_t bins = kDefaultBins;
  std::size_t block_size = 256;
  unsigned threads = 1;
};

OverlapReport scan(const Corpus& corpus, const EmbeddingStore& embeddings, Split source, Split target,
                   const ScanOptions& options = {});

/// Builds the report from precomputed neighbour lists (one per query).
OverlapReport summarize_neighbors(SplitPair pair, std::span<const NeighborList> lists, std::size_t k,
                                  double tau_flag, std::size_t bins = kDefaultBins);

struct KComparison {
  DistributionStats old_stats;
  DistributionStats new_stats;
  double overlap_coefficient = 0.0;
  std::optional<double> mean_reduction;  // (old - new) / old, absent unless old mean > 0
  std::optional<double> kurtosis_delta;  // new - old, absent if either is undefined
};

struct VersionComparison {
  std::map<std::size_t, KComparison> per_k;
};

VersionComparison compare_versions(const OverlapReport& old_report, const OverlapReport& new_report);

// ---------------------------------------------------------------------------
// Clustering and purge

enum class Linkage { kAverage };

struct ClusterSet {
  // Members ascending within a cluster; clusters ordered by first member.
  std::vector<std::vector<std::string>> clusters;
  Linkage linkage = Linkage::kAverage;
  double tau_cluster = kDefaultTauCluster;
};

/// Average-linkage agglomeration on cosine distance. Merging stops once the
/// closest pair of clusters is farther apart than 1 - tau_cluster. Ties go to
/// the pair whose smallest member ids sort first, so the result does not
/// depend on the order of `ids`.
ClusterSet ahc_cluster(const EmbeddingStore& embeddings, std::span<const std::string> ids,
                       double tau_cluster);

enum class PurgePolicy { kPurgeEval, kKeepOne };

std::string_view to_string(PurgePolicy policy) noexcept;
PurgePolicy parse_policy(std::string_view name);

struct Removal {
  std::string removed_id;
  Split split = Split::kTrain;
  std::size_t cluster_id = 0;  // index into ClusterSet::clusters
  std::string reason;
  std::string kept_id;  // a surviving member of the same cluster

  friend bool operator==(const Removal&, const Removal&) = default;
};

struct PurgeResult {
  Corpus corpus;
  std::vector<Removal> log;
};

PurgeResult purge(const Corpus& corpus, const ClusterSet& clusters, PurgePolicy policy);

struct DedupOptions {
  ScanOptions scan;
  double tau_cluster = kDefaultTauCluster;
  PurgePolicy policy = PurgePolicy::kPurgeEval;
};

struct DedupResult {
  std::vector<OverlapReport> scans;
  std::vector<std::string> candidates;  // ids appearing in any flagged pair
  ClusterSet clusters;
  PurgeResult purged;
};

/// Scans validation->train, test->train and test->validation, clusters the
/// ids of every flagged pair and applies the purge policy.
DedupResult dedup(const Corpus& corpus, const EmbeddingStore& embeddings, const DedupOptions& options = {});

}  // namespace groundcheck

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
#include <set>
#include <unordered_set>

#include "groundcheck/error.hpp"
#include "groundcheck/overlap.hpp"

namespace groundcheck {

OverlapReport summarize_neighbors(SplitPair pair, std::span<const NeighborList> lists, std::size_t k,
                                  double tau_flag, std::size_t bins) {
  if (k == 0) raise(ErrorCode::kConfig, "k must be at least 1");
  OverlapReport report;
  report.pair = pair;
  report.k = k;
  report.tau_flag = tau_flag;
  report.num_queries = lists.size();

  std::vector<std::vector<double>> samples(k);
  std::size_t flagged_queries = 0;
  for (const auto& list : lists) {
    bool any = false;
    for (std::size_t rank = 0; rank < list.neighbors.size() && rank < k; ++rank) {
      const auto& nb = list.neighbors[rank];
      samples[rank].push_back(nb.similarity);
      if (nb.similarity >= tau_flag) {
        report.flagged.push_back({list.query_id, nb.id, nb.similarity});
        any = true;
      }
    }
    if (any) ++flagged_queries;
  }
  for (std::size_t rank = 0; rank < k; ++rank) {
    report.per_k_stats.emplace(rank + 1, distribution_stats(samples[rank], bins));
  }
  report.flagged_fraction =
      lists.empty() ? 0.0 : static_cast<double>(flagged_queries) / static_cast<double>(lists.size());
  return report;
}

OverlapReport scan(const Corpus& corpus, const EmbeddingStore& embeddings, Split source, Split target,
                   const ScanOptions& options) {
  if (options.k == 0) raise(ErrorCode::kConfig, "k must be at least 1");
  auto source_ids = corpus.ids(source);
  auto target_ids = corpus.ids(target);
  if (source_ids.empty()) raise(ErrorCode::kEmptySplit, std::string(to_string(source)));
  if (target_ids.empty()) raise(ErrorCode::kEmptySplit, std::string(to_string(target)));

  const EmbeddingStore queries = embeddings.subset(source_ids);
  const EmbeddingStore targets = embeddings.subset(target_ids);

  SearchOptions search;
  search.k = options.k;
  search.include_self = false;
  search.block_size = options.block_size;
  search.threads = options.threads;
  const auto lists = top_k_cross(queries, targets, search);
  return summarize_neighbors({source, target}, lists, options.k, options.tau_flag, options.bins);
}

VersionComparison compare_versions(const OverlapReport& old_report, const OverlapReport& new_report) {
  if (!(old_report.pair == new_report.pair)) {
    raise(ErrorCode::kReportMismatch, "reports cover different split pairs");
  }
  if (old_report.k != new_report.k) {
    raise(ErrorCode::kReportMismatch, "K differs: " + std::to_string(old_report.k) + " vs " +
                                          std::to_string(new_report.k));
  }
  VersionComparison cmp;
  for (std::size_t k = 1; k <= old_report.k; ++k) {
    auto a = old_report.per_k_stats.find(k);
    auto b = new_report.per_k_stats.find(k);
    if (a == old_report.per_k_stats.end() || b == new_report.per_k_stats.end()) {
      raise(ErrorCode::kReportMismatch, "missing statistics for k=" + std::to_string(k));
    }
    KComparison c;
    c.old_stats = a->second;
    c.new_stats = b->second;
    c.overlap_coefficient = overlap_coefficient(c.old_stats, c.new_stats);
    if (c.old_stats.n > 0 && c.new_stats.n > 0 && c.old_stats.mean > 0.0) {
      c.mean_reduction = (c.old_stats.mean - c.new_stats.mean) / c.old_stats.mean;
    }
    if (c.old_stats.excess_kurtosis && c.new_stats.excess_kurtosis) {
      c.kurtosis_delta = *c.new_stats.excess_kurtosis - *c.old_stats.excess_kurtosis;
    }
    cmp.per_k.emplace(k, std::move(c));
  }
  return cmp;
}

ClusterSet ahc_cluster(const EmbeddingStore& embeddings, std::span<const std::string> ids, double tau_cluster) {
  if (ids.empty()) raise(ErrorCode::kEmptyInput, "no ids to cluster");
  if (!(tau_cluster > 0.0 && tau_cluster <= 1.0)) {
    raise(ErrorCode::kConfig, "tau_cluster must lie in (0, 1]");
  }
  std::vector<std::string> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const EmbeddingStore rows = embeddings.subset(sorted);
  const std::size_t n = sorted.size();

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = 1.0 - cosine(rows.vector(i), rows.vector(j));
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }
  auto d = [&](std::size_t i, std::size_t j) -> double& { return dist[i * n + j]; };

  // Clusters are named by their smallest member index, which is also the
  // smallest member id because `sorted` is ascending.
  auto closer = [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b) {
    const double x = d(i, j);
    const double y = d(a, b);
    if (x != y) return x < y;
    const auto p = std::minmax(i, j);
    const auto q = std::minmax(a, b);
    return p < q;
  };

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<bool> active(n, true);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  std::vector<std::size_t> best(n, kNone);

  auto refresh = [&](std::size_t i) {
    best[i] = kNone;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      if (best[i] == kNone || closer(i, j, i, best[i])) best[i] = j;
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  const double max_distance = 1.0 - tau_cluster;
  for (;;) {
    std::size_t pick = kNone;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i] || best[i] == kNone) continue;
      if (pick == kNone || closer(i, best[i], pick, best[pick])) pick = i;
    }
    if (pick == kNone || d(pick, best[pick]) > max_distance) break;

    const std::size_t a = std::min(pick, best[pick]);
    const std::size_t b = std::max(pick, best[pick]);
    const double wa = static_cast<double>(size[a]);
    const double wb = static_cast<double>(size[b]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double merged = (wa * d(a, k) + wb * d(b, k)) / (wa + wb);
      d(a, k) = merged;
      d(k, a) = merged;
    }
    size[a] += size[b];
    active[b] = false;
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();

    refresh(a);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a) continue;
      if (best[k] == a || best[k] == b) {
        refresh(k);
      } else if (closer(k, a, k, best[k])) {
        best[k] = a;
      }
    }
  }

  ClusterSet out;
  out.linkage = Linkage::kAverage;
  out.tau_cluster = tau_cluster;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    auto m = members[i];
    std::sort(m.begin(), m.end());
    std::vector<std::string> cluster;
    cluster.reserve(m.size());
    for (auto idx : m) cluster.push_back(sorted[idx]);
    out.clusters.push_back(std::move(cluster));
  }
  return out;
}

std::string_view to_string(PurgePolicy policy) noexcept {
  switch (policy) {
    case PurgePolicy::kPurgeEval: return "purge_eval";
    case PurgePolicy::kKeepOne: return "keep_one";
  }
  return "purge_eval";
}

PurgePolicy parse_policy(std::string_view name) {
  if (name == "purge_eval") return PurgePolicy::kPurgeEval;
  if (name == "keep_one") return PurgePolicy::kKeepOne;
  raise(ErrorCode::kConfig, "unknown purge policy '" + std::string(name) + "'");
}

PurgeResult purge(const Corpus& corpus, const ClusterSet& clusters, PurgePolicy policy) {
  if (policy != PurgePolicy::kPurgeEval && policy != PurgePolicy::kKeepOne) {
    raise(ErrorCode::kConfig, "unknown purge policy");
  }
  PurgeResult result;
  std::unordered_set<std::string> removed;

  for (std::size_t cid = 0; cid < clusters.clusters.size(); ++cid) {
    const auto& cluster = clusters.clusters[cid];
    if (cluster.size() < 2) continue;
    std::vector<const CorpusRecord*> recs;
    recs.reserve(cluster.size());
    for (const auto& id : cluster) {
      const CorpusRecord* r = corpus.find(id);
      if (!r) raise(ErrorCode::kConfig, "cluster member '" + id + "' is not in the corpus");
      recs.push_back(r);
    }
    std::sort(recs.begin(), recs.end(), [](auto* x, auto* y) { return x->id < y->id; });

    const CorpusRecord* first_train = nullptr;
    for (auto* r : recs) {
      if (r->split == Split::kTrain) {
        first_train = r;
        break;
      }
    }

    if (policy == PurgePolicy::kPurgeEval) {
      if (!first_train) continue;
      for (auto* r : recs) {
        if (r->split == Split::kTrain) continue;
        result.log.push_back({r->id, r->split, cid, "shares_cluster_with_train", first_train->id});
        removed.insert(r->id);
      }
    } else {
      const CorpusRecord* keep = first_train ? first_train : recs.front();
      for (auto* r : recs) {
        if (r == keep) continue;
        result.log.push_back({r->id, r->split, cid, "duplicate_in_cluster", keep->id});
        removed.insert(r->id);
      }
    }
  }

  std::vector<CorpusRecord> kept;
  kept.reserve(corpus.size() - removed.size());
  for (const auto& r : corpus.records()) {
    if (!removed.contains(r.id)) kept.push_back(r);
  }
  result.corpus = Corpus(std::move(kept));
  return result;
}

DedupResult dedup(const Corpus& corpus, const EmbeddingStore& embeddings, const DedupOptions& options) {
  DedupResult result;
  result.clusters.tau_cluster = options.tau_cluster;
  const SplitPair pairs[] = {{Split::kValidation, Split::kTrain},
                             {Split::kTest, Split::kTrain},
                             {Split::kTest, Split::kValidation}};
  std::set<std::string> candidates;
  for (const auto& p : pairs) {
    if (corpus.ids(p.source).empty() || corpus.ids(p.target).empty()) continue;
    auto report = scan(corpus, embeddings, p.source, p.target, options.scan);
    for (const auto& f : report.flagged) {
      candidates.insert(f.query_id);
      candidates.insert(f.neighbor_id);
    }
    result.scans.push_back(std::move(report));
  }
  result.candidates.assign(candidates.begin(), candidates.end());
  if (!result.candidates.empty()) {
    result.clusters = ahc_cluster(embeddings, result.candidates, options.tau_cluster);
  }
  result.purged = purge(corpus, result.clusters, options.policy);
  return result;
}

}  // namespace groundcheck

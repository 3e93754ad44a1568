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
#include <fstream>
#include <istream>
#include <numeric>

#include "groundcheck/error.hpp"
#include "groundcheck/simsearch.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace groundcheck {

EmbeddingStore::EmbeddingStore(std::size_t dim, std::vector<std::string> ids, std::vector<double> data)
    : dim_(dim), ids_(std::move(ids)) {
  if (dim_ == 0 && !ids_.empty()) raise(ErrorCode::kDim, "embedding dimension must be positive");
  if (data.size() != ids_.size() * dim_) {
    raise(ErrorCode::kDim, "expected " + std::to_string(ids_.size() * dim_) + " values, got " +
                               std::to_string(data.size()));
  }
  data_.resize(data.size());
  index_.reserve(ids_.size());
  for (std::size_t row = 0; row < ids_.size(); ++row) {
    if (!index_.emplace(ids_[row], row).second) raise(ErrorCode::kDuplicateId, ids_[row]);
    const double* v = data.data() + row * dim_;
    double sq = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (!std::isfinite(v[j])) raise(ErrorCode::kSchema, "non-finite component in '" + ids_[row] + "'");
      sq += v[j] * v[j];
    }
    if (sq == 0.0) raise(ErrorCode::kZeroVector, ids_[row]);
    const double norm = std::sqrt(sq);
    for (std::size_t j = 0; j < dim_; ++j) data_[row * dim_ + j] = static_cast<float>(v[j] / norm);
  }
}

std::optional<std::size_t> EmbeddingStore::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingStore EmbeddingStore::subset(std::span<const std::string> ids) const {
  EmbeddingStore out;
  out.dim_ = dim_;
  out.ids_.assign(ids.begin(), ids.end());
  out.data_.reserve(ids.size() * dim_);
  out.index_.reserve(ids.size());
  for (std::size_t row = 0; row < ids.size(); ++row) {
    auto src = index_of(ids[row]);
    if (!src) raise(ErrorCode::kMissingEmbedding, ids[row]);
    if (!out.index_.emplace(ids[row], row).second) raise(ErrorCode::kDuplicateId, ids[row]);
    auto v = vector(*src);
    out.data_.insert(out.data_.end(), v.begin(), v.end());
  }
  return out;
}

EmbeddingStore parse_embeddings(std::istream& in) {
  std::vector<std::string> ids;
  std::vector<double> data;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "embeddings line " + std::to_string(line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      raise(ErrorCode::kParse, where + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() || !obj.contains("vector") ||
        !obj["vector"].is_array()) {
      raise(ErrorCode::kSchema, where + ": expected {\"id\": string, \"vector\": [number]}");
    }
    const auto& vec = obj["vector"];
    if (ids.empty()) {
      dim = vec.size();
      if (dim == 0) raise(ErrorCode::kDim, where + ": empty vector");
    } else if (vec.size() != dim) {
      raise(ErrorCode::kDim, where + ": dimension " + std::to_string(vec.size()) + " != " +
                                 std::to_string(dim));
    }
    for (const auto& x : vec) {
      if (!x.is_number()) raise(ErrorCode::kSchema, where + ": vector entries must be numbers");
      data.push_back(x.get<double>());
    }
    ids.push_back(obj["id"].get<std::string>());
  }
  return EmbeddingStore(dim, std::move(ids), std::move(data));
}

EmbeddingStore load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIo, "cannot open embeddings file " + path.string());
  return parse_embeddings(in);
}

namespace {

inline double dot(const float* a, const float* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

inline double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

struct Candidate {
  double sim;
  std::size_t rank;  // position of the target id in ascending id order
  std::size_t row;
};

// True when a ranks ahead of b.
inline bool ahead(const Candidate& a, const Candidate& b) {
  return a.sim > b.sim || (a.sim == b.sim && a.rank < b.rank);
}

}  // namespace

double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    raise(ErrorCode::kDim, "cosine of vectors with dims " + std::to_string(u.size()) + " and " +
                               std::to_string(v.size()));
  }
  return clamp_unit(dot(u.data(), v.data(), u.size()));
}

std::vector<NeighborList> top_k_cross(const EmbeddingStore& queries, const EmbeddingStore& targets,
                                      const SearchOptions& options) {
  if (options.k == 0) raise(ErrorCode::kConfig, "k must be at least 1");
  if (targets.empty()) raise(ErrorCode::kEmptyTarget, "target set is empty");
  if (!queries.empty() && queries.dim() != targets.dim()) {
    raise(ErrorCode::kDim, "query dim " + std::to_string(queries.dim()) + " != target dim " +
                               std::to_string(targets.dim()));
  }
  const std::size_t dim = targets.dim();
  const std::size_t block = std::max<std::size_t>(1, options.block_size);
  const auto& tids = targets.ids();

  std::vector<std::size_t> order(tids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return tids[a] < tids[b]; });
  std::vector<std::size_t> rank(tids.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  std::vector<NeighborList> out(queries.size());
  const std::size_t query_blocks = (queries.size() + block - 1) / block;

  detail::parallel_for(query_blocks, options.threads, [&](std::size_t qb) {
    const std::size_t q0 = qb * block;
    const std::size_t q1 = std::min(queries.size(), q0 + block);
    // Min-heaps on rank-ahead order: the worst kept candidate sits at front.
    std::vector<std::vector<Candidate>> heaps(q1 - q0);
    std::vector<std::optional<std::size_t>> self_row(q1 - q0);
    for (std::size_t q = q0; q < q1; ++q) {
      heaps[q - q0].reserve(options.k + 1);
      if (!options.include_self) self_row[q - q0] = targets.index_of(queries.ids()[q]);
    }
    for (std::size_t t0 = 0; t0 < targets.size(); t0 += block) {
      const std::size_t t1 = std::min(targets.size(), t0 + block);
      for (std::size_t q = q0; q < q1; ++q) {
        const float* qv = queries.vector(q).data();
        auto& heap = heaps[q - q0];
        const auto& skip = self_row[q - q0];
        for (std::size_t t = t0; t < t1; ++t) {
          if (skip && *skip == t) continue;
          Candidate c{clamp_unit(dot(qv, targets.vector(t).data(), dim)), rank[t], t};
          if (heap.size() < options.k) {
            heap.push_back(c);
            std::push_heap(heap.begin(), heap.end(), ahead);
          } else if (ahead(c, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), ahead);
            heap.back() = c;
            std::push_heap(heap.begin(), heap.end(), ahead);
          }
        }
      }
    }
    for (std::size_t q = q0; q < q1; ++q) {
      auto& heap = heaps[q - q0];
      std::sort(heap.begin(), heap.end(), ahead);
      NeighborList list;
      list.query_id = queries.ids()[q];
      list.neighbors.reserve(heap.size());
      for (const auto& c : heap) list.neighbors.push_back({tids[c.row], c.sim});
      out[q] = std::move(list);
    }
  });
  return out;
}

}  // namespace groundcheck

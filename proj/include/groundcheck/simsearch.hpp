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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace groundcheck {

/// Row-major matrix of unit-L2 float vectors aligned with a list of ids.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  // Rows are renormalized in double precision. Throws DimError when
  // data.size() != ids.size() * dim, ZeroVectorError for a zero row and
  // DuplicateId for repeated ids.
  EmbeddingStore(std::size_t dim, std::vector<std::string> ids, std::vector<double> data);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  std::span<const float> vector(std::size_t row) const noexcept {
    return {data_.data() + row * dim_, dim_};
  }
  std::optional<std::size_t> index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return index_of(id).has_value(); }

  /// Rows for the given ids, in that order. Missing ids raise MissingEmbedding.
  EmbeddingStore subset(std::span<const std::string> ids) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

EmbeddingStore load_embeddings(const std::filesystem::path& path);
EmbeddingStore parse_embeddings(std::istream& in);

/// Dot product accumulated in double and clamped to [-1, 1].
double cosine(std::span<const float> u, std::span<const float> v);

struct Neighbor {
  std::string id;
  double similarity = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct NeighborList {
  std::string query_id;
  std::vector<Neighbor> neighbors;  // descending similarity, ties by ascending id

  friend bool operator==(const NeighborList&, const NeighborList&) = default;
};

struct SearchOptions {
  std::size_t k = 3;
  bool include_self = false;  // when false, a target with the query's id is skipped
  std::size_t block_size = 256;
  unsigned threads = 1;  // 0 picks hardware concurrency
};

/// Exact top-k cosine neighbours of every query among the targets. Output is
/// independent of the thread count and of target insertion order.
std::vector<NeighborList> top_k_cross(const EmbeddingStore& queries, const EmbeddingStore& targets,
                                      const SearchOptions& options);

}  // namespace groundcheck

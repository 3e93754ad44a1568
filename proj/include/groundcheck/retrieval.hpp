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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "groundcheck/corpus.hpp"

namespace groundcheck {

struct Document {
  std::string doc_id;
  std::string text;
};

/// Immutable document collection with cached tokenization and document
/// frequencies.
class DocumentPool {
 public:
  DocumentPool() = default;
  explicit DocumentPool(std::vector<Document> docs);

  const std::vector<Document>& docs() const noexcept { return docs_; }
  std::size_t size() const noexcept { return docs_.size(); }
  bool empty() const noexcept { return docs_.empty(); }

  const Document* find(std::string_view doc_id) const;
  const TokenSeq& tokens(std::size_t i) const noexcept { return tokens_[i]; }
  std::size_t doc_freq(const std::string& token) const;
  std::size_t term_freq(std::size_t i, const std::string& token) const;
  double average_length() const noexcept { return avg_len_; }

 private:
  std::vector<Document> docs_;
  std::vector<TokenSeq> tokens_;
  std::vector<std::unordered_map<std::string, std::size_t>> term_freqs_;
  std::unordered_map<std::string, std::size_t> doc_freq_;
  std::unordered_map<std::string, std::size_t> index_;
  double avg_len_ = 0.0;
};

DocumentPool load_pool(const std::filesystem::path& path);
DocumentPool parse_pool(std::istream& in);

struct RankedDoc {
  std::string doc_id;
  double score = 0.0;

  friend bool operator==(const RankedDoc&, const RankedDoc&) = default;
};

struct Retrieval {
  std::string query_id;
  std::vector<RankedDoc> ranked;  // descending score, ties by ascending doc_id

  friend bool operator==(const Retrieval&, const Retrieval&) = default;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Okapi BM25 with idf = ln(1 + (N - df + 0.5) / (df + 0.5)); every query
/// token occurrence contributes.
std::vector<double> bm25_scores(const TokenSeq& query, const DocumentPool& pool, double k1, double b);

Retrieval retrieve_topk(std::string_view question, const DocumentPool& pool, std::size_t k,
                        const Bm25Params& params = {});

/// k documents drawn uniformly without replacement from pool \ exclude, in
/// draw order. The generator is portable: the same seed gives the same draw
/// on every platform.
Retrieval random_retrieve(const DocumentPool& pool, std::size_t k, const std::set<std::string>& exclude,
                          std::uint64_t seed);

inline constexpr std::string_view kDefaultSeparator = "\n\n";

std::string concat_sources(const Retrieval& retrieval, const DocumentPool& pool,
                           std::string_view separator = kDefaultSeparator);

/// Retriever M: ranks documents for a record and materializes the ranked
/// documents as one source text.
class Retriever {
 public:
  virtual ~Retriever() = default;
  virtual std::string name() const = 0;
  virtual Retrieval retrieve(const CorpusRecord& record, std::size_t k) const = 0;
  virtual std::string source_text(const Retrieval& retrieval, const CorpusRecord& record,
                                  std::string_view separator) const = 0;
};

class Bm25Retriever final : public Retriever {
 public:
  explicit Bm25Retriever(std::shared_ptr<const DocumentPool> pool, Bm25Params params = {});
  std::string name() const override { return "bm25"; }
  Retrieval retrieve(const CorpusRecord& record, std::size_t k) const override;
  std::string source_text(const Retrieval& retrieval, const CorpusRecord& record,
                          std::string_view separator) const override;

 private:
  std::shared_ptr<const DocumentPool> pool_;
  Bm25Params params_;
};

/// Uses the record's own `documents` list in stored order; document ids are
/// "<record id>#<position>".
class CorpusDocumentsRetriever final : public Retriever {
 public:
  std::string name() const override { return "corpus"; }
  Retrieval retrieve(const CorpusRecord& record, std::size_t k) const override;
  std::string source_text(const Retrieval& retrieval, const CorpusRecord& record,
                          std::string_view separator) const override;
};

}  // namespace groundcheck

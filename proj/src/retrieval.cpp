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
#include <random>

#include "groundcheck/error.hpp"
#include "groundcheck/retrieval.hpp"
#include "json.hpp"

namespace groundcheck {

DocumentPool::DocumentPool(std::vector<Document> docs) : docs_(std::move(docs)) {
  tokens_.reserve(docs_.size());
  term_freqs_.reserve(docs_.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    if (docs_[i].doc_id.empty()) raise(ErrorCode::kSchema, "empty doc_id");
    if (!index_.emplace(docs_[i].doc_id, i).second) raise(ErrorCode::kDuplicateId, docs_[i].doc_id);
    tokens_.push_back(tokenize(docs_[i].text));
    std::unordered_map<std::string, std::size_t> tf;
    for (const auto& t : tokens_.back()) ++tf[t];
    for (const auto& [t, _] : tf) ++doc_freq_[t];
    term_freqs_.push_back(std::move(tf));
    total += tokens_.back().size();
  }
  avg_len_ = docs_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(docs_.size());
}

const Document* DocumentPool::find(std::string_view doc_id) const {
  auto it = index_.find(std::string(doc_id));
  return it == index_.end() ? nullptr : &docs_[it->second];
}

std::size_t DocumentPool::doc_freq(const std::string& token) const {
  auto it = doc_freq_.find(token);
  return it == doc_freq_.end() ? 0 : it->second;
}

std::size_t DocumentPool::term_freq(std::size_t i, const std::string& token) const {
  const auto& tf = term_freqs_[i];
  auto it = tf.find(token);
  return it == tf.end() ? 0 : it->second;
}

DocumentPool parse_pool(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const std::string where = "pool line " + std::to_string(line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      raise(ErrorCode::kParse, where + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("doc_id") || !obj["doc_id"].is_string() || !obj.contains("text") ||
        !obj["text"].is_string()) {
      raise(ErrorCode::kSchema, where + ": expected {\"doc_id\": string, \"text\": string}");
    }
    docs.push_back({obj["doc_id"].get<std::string>(), obj["text"].get<std::string>()});
  }
  return DocumentPool(std::move(docs));
}

DocumentPool load_pool(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIo, "cannot open document pool " + path.string());
  return parse_pool(in);
}

std::vector<double> bm25_scores(const TokenSeq& query, const DocumentPool& pool, double k1, double b) {
  const double n = static_cast<double>(pool.size());
  const double avg = pool.average_length();
  std::vector<double> scores(pool.size(), 0.0);
  for (const auto& term : query) {
    const double df = static_cast<double>(pool.doc_freq(term));
    if (df == 0.0) continue;
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const double tf = static_cast<double>(pool.term_freq(i, term));
      if (tf == 0.0) continue;
      const double len = static_cast<double>(pool.tokens(i).size());
      const double norm = avg > 0.0 ? len / avg : 0.0;
      scores[i] += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
    }
  }
  return scores;
}

namespace {

Retrieval rank_by_score(const DocumentPool& pool, const std::vector<double>& scores, std::size_t k) {
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  const auto& docs = pool.docs();
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return docs[a].doc_id < docs[b].doc_id;
  };
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), better);
  Retrieval r;
  r.ranked.reserve(take);
  for (std::size_t i = 0; i < take; ++i) r.ranked.push_back({docs[order[i]].doc_id, scores[order[i]]});
  return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Unbiased draw from [0, bound) by rejection; std distributions are not
// specified bit-exactly across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

Retrieval retrieve_topk(std::string_view question, const DocumentPool& pool, std::size_t k,
                        const Bm25Params& params) {
  if (k == 0) raise(ErrorCode::kConfig, "k must be at least 1");
  const TokenSeq query = tokenize(question);
  if (query.empty()) raise(ErrorCode::kEmptyQuery, "question has no tokens");
  if (pool.empty()) raise(ErrorCode::kEmptyInput, "document pool is empty");
  return rank_by_score(pool, bm25_scores(query, pool, params.k1, params.b), k);
}

Retrieval random_retrieve(const DocumentPool& pool, std::size_t k, const std::set<std::string>& exclude,
                          std::uint64_t seed) {
  if (k == 0) raise(ErrorCode::kConfig, "k must be at least 1");
  std::vector<std::size_t> eligible;
  eligible.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!exclude.contains(pool.docs()[i].doc_id)) eligible.push_back(i);
  }
  if (eligible.size() < k) {
    raise(ErrorCode::kPoolExhausted, "need " + std::to_string(k) + " documents, only " +
                                         std::to_string(eligible.size()) + " eligible");
  }
  std::mt19937_64 rng(splitmix64(seed));
  Retrieval r;
  r.ranked.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
    r.ranked.push_back({pool.docs()[eligible[i]].doc_id, 0.0});
  }
  return r;
}

std::string concat_sources(const Retrieval& retrieval, const DocumentPool& pool, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < retrieval.ranked.size(); ++i) {
    const Document* doc = pool.find(retrieval.ranked[i].doc_id);
    if (!doc) raise(ErrorCode::kMissingDoc, retrieval.ranked[i].doc_id);
    if (i) out += separator;
    out += doc->text;
  }
  return out;
}

Bm25Retriever::Bm25Retriever(std::shared_ptr<const DocumentPool> pool, Bm25Params params)
    : pool_(std::move(pool)), params_(params) {
  if (!pool_) raise(ErrorCode::kConfig, "bm25 retriever needs a document pool");
}

Retrieval Bm25Retriever::retrieve(const CorpusRecord& record, std::size_t k) const {
  Retrieval r = retrieve_topk(record.question, *pool_, k, params_);
  r.query_id = record.id;
  return r;
}

std::string Bm25Retriever::source_text(const Retrieval& retrieval, const CorpusRecord&,
                                       std::string_view separator) const {
  return concat_sources(retrieval, *pool_, separator);
}

namespace {

DocumentPool record_pool(const CorpusRecord& record) {
  if (!record.documents || record.documents->empty()) {
    raise(ErrorCode::kMissingDoc, "record '" + record.id + "' has no documents");
  }
  std::vector<Document> docs;
  for (std::size_t i = 0; i < record.documents->size(); ++i) {
    docs.push_back({record.id + "#" + std::to_string(i), (*record.documents)[i]});
  }
  return DocumentPool(std::move(docs));
}

}  // namespace

Retrieval CorpusDocumentsRetriever::retrieve(const CorpusRecord& record, std::size_t k) const {
  if (k == 0) raise(ErrorCode::kConfig, "k must be at least 1");
  if (!record.documents || record.documents->empty()) {
    raise(ErrorCode::kMissingDoc, "record '" + record.id + "' has no documents");
  }
  const std::size_t n = record.documents->size();
  Retrieval r;
  r.query_id = record.id;
  for (std::size_t i = 0; i < std::min(k, n); ++i) {
    r.ranked.push_back({record.id + "#" + std::to_string(i), static_cast<double>(n - i)});
  }
  return r;
}

std::string CorpusDocumentsRetriever::source_text(const Retrieval& retrieval, const CorpusRecord& record,
                                                  std::string_view separator) const {
  return concat_sources(retrieval, record_pool(record), separator);
}

}  // namespace groundcheck

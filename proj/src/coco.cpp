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

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <unordered_set>

#include "groundcheck/coco.hpp"
#include "groundcheck/error.hpp"

namespace groundcheck {

const std::set<std::string>& default_stoplist() {
  static const std::set<std::string> words = {
      "a",        "about",   "above",   "after",  "again",  "against", "all",     "am",     "an",
      "and",      "any",     "are",     "as",     "at",     "be",      "because", "been",   "before",
      "being",    "below",   "between", "both",   "but",    "by",      "can",     "could",  "did",
      "do",       "does",    "doing",   "down",   "during", "each",    "few",     "for",    "from",
      "further",  "had",     "has",     "have",   "having", "he",      "her",     "here",   "hers",
      "herself",  "him",     "himself", "his",    "how",    "i",       "if",      "in",     "into",
      "is",       "it",      "its",     "itself", "just",   "me",      "more",    "most",   "my",
      "myself",   "no",      "nor",     "not",    "now",    "of",      "off",     "on",     "once",
      "only",     "or",      "other",   "our",    "ours",   "ourselves", "out",   "over",   "own",
      "same",     "she",     "should",  "so",     "some",   "such",    "than",    "that",   "the",
      "their",    "theirs",  "them",    "themselves", "then", "there", "these",   "they",   "this",
      "those",    "through", "to",      "too",    "under",  "until",   "up",      "very",   "was",
      "we",       "were",    "what",    "when",   "where",  "which",   "while",   "who",    "whom",
      "why",      "will",    "with",    "would",  "you",    "your",    "yours",   "yourself", "yourselves",
  };
  return words;
}

namespace {

struct TokenShape {
  std::size_t code_points = 0;
  bool has_alnum = false;
};

TokenShape shape_of(const std::string& token) {
  TokenShape s;
  const auto* bytes = reinterpret_cast<const uint8_t*>(token.data());
  const auto len = static_cast<int32_t>(token.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(bytes, i, len, c);
    ++s.code_points;
    if (c >= 0 && u_isalnum(c)) s.has_alnum = true;
  }
  return s;
}

}  // namespace

KeyTokenSet select_key_tokens(const TokenSeq& answer, const KeyTokenOptions& options) {
  KeyTokenSet key;
  for (std::size_t i = 0; i < answer.size(); ++i) {
    const std::string& tok = answer[i];
    if (tok == kMaskToken || options.stoplist.contains(tok)) continue;
    const TokenShape s = shape_of(tok);
    if (s.code_points < options.min_len || !s.has_alnum) continue;
    key.indices.push_back(i);
    key.tokens.push_back(tok);
  }
  if (key.indices.empty()) raise(ErrorCode::kNoKeyTokens, "answer has no key tokens");
  return key;
}

MaskedSource mask_source(std::string_view source, const KeyTokenSet& key) {
  MaskedSource out;
  out.original = std::string(source);
  const std::unordered_set<std::string> targets(key.tokens.begin(), key.tokens.end());
  const TokenizedText text = tokenize_with_spans(source);

  std::string masked;
  std::size_t cursor = 0;
  for (const auto& span : text.spans) {
    if (span.token == kMaskToken || !targets.contains(span.token)) continue;
    masked.append(text.normalized, cursor, span.begin - cursor);
    masked += kMaskToken;
    cursor = span.end;
    ++out.mask_count;
  }
  if (out.mask_count == 0) {
    out.masked = out.original;
    return out;
  }
  masked.append(text.normalized, cursor, std::string::npos);
  out.masked = std::move(masked);
  return out;
}

ScoredAnswer coco_score(std::string_view source, const TokenSeq& answer, const KeyTokenSet& key,
                        const Scorer& scorer) {
  if (key.indices.empty()) raise(ErrorCode::kNoKeyTokens, "empty key token set");
  if (key.tokens.size() != key.indices.size()) raise(ErrorCode::kInvalidRequest, "key tokens and indices differ");
  for (std::size_t j = 0; j < key.indices.size(); ++j) {
    if (key.indices[j] >= answer.size() || answer[key.indices[j]] != key.tokens[j]) {
      raise(ErrorCode::kInvalidRequest, "key token does not match the answer at index " +
                                            std::to_string(key.indices[j]));
    }
  }
  const MaskedSource masked = mask_source(source, key);

  ScoreRequest request{std::string(source), answer, key.indices};
  ScoredAnswer out;
  out.key = key;
  out.p_unmasked = score(request, scorer);
  if (masked.mask_count == 0) {
    out.p_masked = out.p_unmasked;
    out.coco = 0.0;
    return out;
  }
  request.source = masked.masked;
  out.p_masked = score(request, scorer);

  double sum = 0.0;
  for (std::size_t j = 0; j < key.indices.size(); ++j) sum += out.p_unmasked.probs[j] - out.p_masked.probs[j];
  out.coco = sum / static_cast<double>(key.indices.size());
  return out;
}

LfqaScore coco_lfqa(const CorpusRecord& record, const Retriever& retriever, std::size_t k, const Scorer& scorer,
                    const CocoConfig& config) {
  if (!record.answer) raise(ErrorCode::kMissingAnswer, record.id);
  LfqaScore out;
  out.retrieval = retriever.retrieve(record, k);
  const std::string source = retriever.source_text(out.retrieval, record, config.separator);
  const TokenSeq answer = tokenize(*record.answer);
  if (answer.empty()) raise(ErrorCode::kNoKeyTokens, "answer of '" + record.id + "' has no tokens");
  const KeyTokenSet key = select_key_tokens(answer, config.keys);
  out.scored = coco_score(source, answer, key, scorer);
  return out;
}

ScoredAnswer coco_summarization(std::string_view source, std::string_view summary, const Scorer& scorer,
                                const CocoConfig& config) {
  const TokenSeq tokens = tokenize(summary);
  if (tokens.empty()) raise(ErrorCode::kNoKeyTokens, "summary has no tokens");
  const KeyTokenSet key = select_key_tokens(tokens, config.keys);
  return coco_score(source, tokens, key, scorer);
}

GroundingResult grounding_from_sources(const TokenSeq& answer, const KeyTokenSet& key, const RetrievedSource& topk,
                                       const RetrievedSource& random, const Scorer& scorer, std::uint64_t seed) {
  GroundingResult out;
  out.c_topk = coco_score(topk.text, answer, key, scorer).coco;
  out.c_random = coco_score(random.text, answer, key, scorer).coco;
  out.g = out.c_topk - out.c_random;
  out.retrieval_used = topk.retrieval;
  out.random_used = random.retrieval;
  out.seed = seed;
  return out;
}

GroundingResult grounding_score(const CorpusRecord& record, const Retriever& retriever, const DocumentPool& pool,
                                std::size_t k, const Scorer& scorer, std::uint64_t seed, const CocoConfig& config,
                                const GroundingOptions& options) {
  if (!record.answer) raise(ErrorCode::kMissingAnswer, record.id);
  const TokenSeq answer = tokenize(*record.answer);
  if (answer.empty()) raise(ErrorCode::kNoKeyTokens, "answer of '" + record.id + "' has no tokens");
  const KeyTokenSet key = select_key_tokens(answer, config.keys);

  RetrievedSource topk;
  topk.retrieval = retriever.retrieve(record, k);
  topk.text = retriever.source_text(topk.retrieval, record, config.separator);

  std::set<std::string> exclude;
  if (options.exclude_topk) {
    for (const auto& d : topk.retrieval.ranked) exclude.insert(d.doc_id);
  }
  RetrievedSource random;
  random.retrieval = random_retrieve(pool, topk.retrieval.ranked.size(), exclude, seed);
  random.retrieval.query_id = record.id;
  random.text = concat_sources(random.retrieval, pool, config.separator);

  return grounding_from_sources(answer, key, topk, random, scorer, seed);
}

}  // namespace groundcheck

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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "groundcheck/corpus.hpp"
#include "groundcheck/retrieval.hpp"
#include "groundcheck/scoring.hpp"

namespace groundcheck {

struct KeyTokenSet {
  std::vector<std::size_t> indices;  // strictly increasing positions in the answer
  TokenSeq tokens;

  friend bool operator==(const KeyTokenSet&, const KeyTokenSet&) = default;
};

struct MaskedSource {
  std::string original;
  std::string masked;
  std::size_t mask_count = 0;
};

struct ScoredAnswer {
  KeyTokenSet key;
  TokenProbs p_unmasked;
  TokenProbs p_masked;
  double coco = 0.0;

  friend bool operator==(const ScoredAnswer&, const ScoredAnswer&) = default;
};

struct GroundingResult {
  double c_topk = 0.0;
  double c_random = 0.0;
  double g = 0.0;
  Retrieval retrieval_used;
  Retrieval random_used;
  std::uint64_t seed = 0;

  friend bool operator==(const GroundingResult&, const GroundingResult&) = default;
};

/// English function words; content-bearing tokens survive the filter.
const std::set<std::string>& default_stoplist();

struct KeyTokenOptions {
  std::set<std::string> stoplist = default_stoplist();
  std::size_t min_len = 2;  // in code points
};

/// Every occurrence of a non-stopword token with at least min_len code points
/// and one letter or digit. Throws NoKeyTokens when nothing qualifies.
KeyTokenSet select_key_tokens(const TokenSeq& answer, const KeyTokenOptions& options = {});

/// Replaces each source token equal to a key token with the mask sentinel.
/// With no match the original text is returned untouched.
MaskedSource mask_source(std::string_view source, const KeyTokenSet& key);

/// Mean over key positions of P(a | X, prefix) - P(a | X', prefix).
ScoredAnswer coco_score(std::string_view source, const TokenSeq& answer, const KeyTokenSet& key,
                        const Scorer& scorer);

struct CocoConfig {
  KeyTokenOptions keys;
  std::string separator = std::string(kDefaultSeparator);
};

inline constexpr std::size_t kDefaultRetrievalK = 5;

struct LfqaScore {
  ScoredAnswer scored;
  Retrieval retrieval;
};

LfqaScore coco_lfqa(const CorpusRecord& record, const Retriever& retriever, std::size_t k, const Scorer& scorer,
                    const CocoConfig& config = {});

ScoredAnswer coco_summarization(std::string_view source, std::string_view summary, const Scorer& scorer,
                                const CocoConfig& config = {});

struct RetrievedSource {
  Retrieval retrieval;
  std::string text;
};

/// G = CoCo(top-k source) - CoCo(random source) for an answer whose key
/// tokens are already selected.
GroundingResult grounding_from_sources(const TokenSeq& answer, const KeyTokenSet& key, const RetrievedSource& topk,
                                       const RetrievedSource& random, const Scorer& scorer, std::uint64_t seed);

struct GroundingOptions {
  bool exclude_topk = true;  // random draw avoids the retrieved documents
};

GroundingResult grounding_score(const CorpusRecord& record, const Retriever& retriever, const DocumentPool& pool,
                                std::size_t k, const Scorer& scorer, std::uint64_t seed,
                                const CocoConfig& config = {}, const GroundingOptions& options = {});

}  // namespace groundcheck

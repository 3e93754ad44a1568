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
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "groundcheck/corpus.hpp"

namespace groundcheck {

/// Ask for P(answer_tokens[i] | source, answer_tokens[<i]) at each key index.
struct ScoreRequest {
  std::string source;
  TokenSeq answer_tokens;
  std::vector<std::size_t> key_indices;  // strictly increasing, in bounds
};

struct TokenProbs {
  std::vector<double> probs;  // aligned with key_indices, each in (0, 1]

  friend bool operator==(const TokenProbs&, const TokenProbs&) = default;
};

/// Scoring model F. Implementations must be safe to call concurrently.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string name() const = 0;
  virtual TokenProbs score_unchecked(const ScoreRequest& request) const = 0;
};

using ScorerHandle = std::shared_ptr<const Scorer>;

/// Throws InvalidRequest for malformed key indices.
void validate_request(const ScoreRequest& request);

/// Validates the request, runs the scorer and enforces the TokenProbs contract
/// (length mismatch is a ProtocolError, values outside (0, 1] are a
/// ScorerContractViolation).
TokenProbs score(const ScoreRequest& request, const Scorer& scorer);

struct ScorerConfig {
  double lambda = 0.5;  // bigram weight
  double alpha = 1.0;   // add-alpha smoothing
};

/// Smoothed unigram/bigram model whose counts come from tokenize(source).
/// Vocabulary is tokens(source) + tokens(answer) + {<unk>, <mask>}.
class ReferenceModel {
 public:
  ReferenceModel(const std::string& source, const TokenSeq& answer_tokens, ScorerConfig config);

  double unigram(const std::string& token) const;
  double bigram(const std::string& token, const std::string& previous) const;
  /// Interpolated probability; `previous` is null at the first answer position.
  double probability(const std::string& token, const std::string* previous) const;

  const std::vector<std::string>& vocabulary() const noexcept { return vocab_; }
  std::size_t source_length() const noexcept { return total_; }

 private:
  std::size_t count(const std::string& token) const;

  ScorerConfig config_;
  std::size_t total_ = 0;
  std::unordered_map<std::string, std::size_t> unigrams_;
  // previous -> (next -> count), plus how often `previous` starts a bigram
  std::unordered_map<std::string, std::unordered_map<std::string, std::size_t>> bigrams_;
  std::unordered_map<std::string, std::size_t> contexts_;
  std::vector<std::string> vocab_;
};

class ReferenceScorer final : public Scorer {
 public:
  explicit ReferenceScorer(ScorerConfig config = {});
  std::string name() const override { return "reference"; }
  TokenProbs score_unchecked(const ScoreRequest& request) const override;
  const ScorerConfig& config() const noexcept { return config_; }

 private:
  ScorerConfig config_;
};

ScorerHandle reference_scorer(ScorerConfig config = {});

}  // namespace groundcheck

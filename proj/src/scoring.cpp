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
#include <set>

#include "groundcheck/error.hpp"
#include "groundcheck/scoring.hpp"

namespace groundcheck {

void validate_request(const ScoreRequest& request) {
  const auto& idx = request.key_indices;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] >= request.answer_tokens.size()) {
      raise(ErrorCode::kInvalidRequest, "key index " + std::to_string(idx[j]) + " out of bounds");
    }
    if (j > 0 && idx[j] <= idx[j - 1]) raise(ErrorCode::kInvalidRequest, "key indices not strictly increasing");
  }
}

TokenProbs score(const ScoreRequest& request, const Scorer& scorer) {
  validate_request(request);
  TokenProbs out = scorer.score_unchecked(request);
  if (out.probs.size() != request.key_indices.size()) {
    raise(ErrorCode::kProtocol, "scorer '" + scorer.name() + "' returned " + std::to_string(out.probs.size()) +
                                    " probabilities for " + std::to_string(request.key_indices.size()) +
                                    " key tokens");
  }
  for (double p : out.probs) {
    if (!(p > 0.0 && p <= 1.0)) {
      raise(ErrorCode::kScorerContractViolation,
            "scorer '" + scorer.name() + "' returned probability " + std::to_string(p));
    }
  }
  return out;
}

ReferenceModel::ReferenceModel(const std::string& source, const TokenSeq& answer_tokens, ScorerConfig config)
    : config_(config) {
  const TokenSeq tokens = tokenize(source);
  total_ = tokens.size();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    ++unigrams_[tokens[i]];
    if (i + 1 < tokens.size()) {
      ++bigrams_[tokens[i]][tokens[i + 1]];
      ++contexts_[tokens[i]];
    }
  }
  std::set<std::string> vocab(tokens.begin(), tokens.end());
  vocab.insert(answer_tokens.begin(), answer_tokens.end());
  vocab.emplace(kUnkToken);
  vocab.emplace(kMaskToken);
  vocab_.assign(vocab.begin(), vocab.end());
}

std::size_t ReferenceModel::count(const std::string& token) const {
  auto it = unigrams_.find(token);
  return it == unigrams_.end() ? 0 : it->second;
}

double ReferenceModel::unigram(const std::string& token) const {
  const double v = static_cast<double>(vocab_.size());
  return (static_cast<double>(count(token)) + config_.alpha) / (static_cast<double>(total_) + config_.alpha * v);
}

double ReferenceModel::bigram(const std::string& token, const std::string& previous) const {
  const double v = static_cast<double>(vocab_.size());
  double pair = 0.0;
  double ctx = 0.0;
  if (auto it = bigrams_.find(previous); it != bigrams_.end()) {
    if (auto jt = it->second.find(token); jt != it->second.end()) pair = static_cast<double>(jt->second);
    ctx = static_cast<double>(contexts_.at(previous));
  }
  return (pair + config_.alpha) / (ctx + config_.alpha * v);
}

double ReferenceModel::probability(const std::string& token, const std::string* previous) const {
  const double uni = unigram(token);
  if (previous == nullptr) return uni;
  return config_.lambda * bigram(token, *previous) + (1.0 - config_.lambda) * uni;
}

ReferenceScorer::ReferenceScorer(ScorerConfig config) : config_(config) {
  if (!(config.lambda >= 0.0 && config.lambda <= 1.0)) raise(ErrorCode::kConfig, "lambda must lie in [0, 1]");
  if (!(config.alpha > 0.0) || !std::isfinite(config.alpha)) raise(ErrorCode::kConfig, "alpha must be positive");
}

TokenProbs ReferenceScorer::score_unchecked(const ScoreRequest& request) const {
  const ReferenceModel model(request.source, request.answer_tokens, config_);
  TokenProbs out;
  out.probs.reserve(request.key_indices.size());
  for (std::size_t idx : request.key_indices) {
    const std::string* prev = idx == 0 ? nullptr : &request.answer_tokens[idx - 1];
    out.probs.push_back(model.probability(request.answer_tokens[idx], prev));
  }
  return out;
}

ScorerHandle reference_scorer(ScorerConfig config) { return std::make_shared<ReferenceScorer>(config); }

}  // namespace groundcheck

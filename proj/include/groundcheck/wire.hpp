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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "groundcheck/scoring.hpp"

namespace groundcheck {

// Newline-delimited JSON, one request per line, responses in request order:
//   {"op":"hello"}                                  -> {"name","protocol":1,"embed_dim"}
//   {"op":"score","source","answer_tokens","key_indices"} -> {"probs"} | {"error"}
//   {"op":"embed","texts"}                          -> {"vectors"} | {"error"}

struct Endpoint {
  enum class Kind { kProcess, kTcp };
  Kind kind = Kind::kProcess;
  std::string command;  // run through /bin/sh -c, speaking on stdin/stdout
  std::string host;
  std::uint16_t port = 0;
};

/// "tcp://host:port" selects a socket; anything else is a command line.
Endpoint parse_endpoint(std::string_view spec);

struct PeerInfo {
  std::string name;
  int protocol = 0;
  std::optional<std::size_t> embed_dim;
};

struct ExternalOptions {
  std::chrono::milliseconds timeout{30000};
  std::size_t pool_size = 1;
  std::optional<std::string> expected_name;
  std::optional<std::size_t> expected_embed_dim;
};

namespace wire {

inline constexpr int kProtocolVersion = 1;

std::string hello_request();
std::string score_request(const ScoreRequest& request);
std::string embed_request(std::span<const std::string> texts);

PeerInfo parse_hello(std::string_view line);
TokenProbs parse_score(std::string_view line, std::size_t expected_count);
std::vector<std::vector<double>> parse_embed(std::string_view line, std::size_t expected_count,
                                             std::optional<std::size_t> dim);

}  // namespace wire

/// Client for an out-of-process scorer. Holds up to pool_size connections,
/// each with at most one request in flight; score() may be called from
/// several threads.
class ExternalScorer final : public Scorer {
 public:
  static std::shared_ptr<ExternalScorer> connect(const Endpoint& endpoint, const ExternalOptions& options = {});
  ~ExternalScorer() override;

  std::string name() const override;
  const PeerInfo& peer() const noexcept;
  TokenProbs score_unchecked(const ScoreRequest& request) const override;
  std::vector<std::vector<double>> embed(std::span<const std::string> texts) const;

  struct Impl;

 private:
  explicit ExternalScorer(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

ScorerHandle external_scorer(const Endpoint& endpoint, const ExternalOptions& options = {});

/// "reference" or "external:<endpoint>".
ScorerHandle make_scorer(std::string_view spec, const ScorerConfig& reference_config = {},
                         const ExternalOptions& external_options = {});

}  // namespace groundcheck

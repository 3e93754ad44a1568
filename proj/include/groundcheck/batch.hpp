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
#include <optional>
#include <string>
#include <vector>

#include "groundcheck/coco.hpp"
#include "groundcheck/corpus.hpp"
#include "groundcheck/json_io.hpp"
#include "groundcheck/retrieval.hpp"
#include "groundcheck/scoring.hpp"

namespace groundcheck {

struct BatchOptions {
  std::size_t k = kDefaultRetrievalK;
  CocoConfig coco;
  GroundingOptions grounding;
  std::optional<Split> split;  // restrict to one split
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// One JSON object per scored record plus a trailing summary object. Records
/// without an answer, without key tokens, without documents or with an empty
/// question are skipped and counted.
struct BatchResult {
  std::vector<Json> records;
  Json summary;
};

BatchResult run_coco_batch(const Corpus& corpus, const Retriever& retriever, const Scorer& scorer,
                           const BatchOptions& options = {});

BatchResult run_grounding_batch(const Corpus& corpus, const Retriever& retriever, const DocumentPool& pool,
                                const Scorer& scorer, const BatchOptions& options = {});

/// Per-record seed: independent of record order, stable across platforms.
std::uint64_t record_seed(std::uint64_t base_seed, const std::string& record_id);

std::string to_jsonl(const BatchResult& result);

}  // namespace groundcheck

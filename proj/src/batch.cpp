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

#include <variant>

#include "groundcheck/batch.hpp"
#include "groundcheck/error.hpp"
#include "parallel.hpp"

namespace groundcheck {
namespace {

enum class Skip { kNone, kNoAnswer, kNoKeyTokens, kNoDocuments, kEmptyQuery, kOutOfSplit };

struct Outcome {
  Skip skip = Skip::kNone;
  Json line;
  std::vector<double> values;
};

Skip classify(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kMissingAnswer: return Skip::kNoAnswer;
    case ErrorCode::kNoKeyTokens: return Skip::kNoKeyTokens;
    case ErrorCode::kMissingDoc: return Skip::kNoDocuments;
    case ErrorCode::kEmptyQuery: return Skip::kEmptyQuery;
    default: return Skip::kNone;
  }
}

template <typename Fn>
std::vector<Outcome> evaluate(const Corpus& corpus, const BatchOptions& options, Fn&& fn) {
  const auto& records = corpus.records();
  std::vector<Outcome> outcomes(records.size());
  detail::parallel_for(records.size(), options.threads, [&](std::size_t i) {
    const CorpusRecord& rec = records[i];
    Outcome& out = outcomes[i];
    if (options.split && rec.split != *options.split) {
      out.skip = Skip::kOutOfSplit;
      return;
    }
    if (!rec.answer) {
      out.skip = Skip::kNoAnswer;
      return;
    }
    try {
      fn(rec, out);
    } catch (const Error& e) {
      out.skip = classify(e);
      if (out.skip == Skip::kNone) throw;
    }
  });
  return outcomes;
}

Json mean_or_null(double sum, std::size_t n) { return n ? Json(sum / static_cast<double>(n)) : Json(nullptr); }

BatchResult collect(const char* command, std::vector<Outcome> outcomes, const std::vector<std::string>& names,
                    const BatchOptions& options) {
  BatchResult result;
  std::size_t skipped[6] = {};
  std::vector<double> sums(names.size(), 0.0);
  std::size_t scored = 0;
  for (auto& o : outcomes) {
    if (o.skip != Skip::kNone) {
      ++skipped[static_cast<int>(o.skip)];
      continue;
    }
    ++scored;
    for (std::size_t v = 0; v < names.size(); ++v) sums[v] += o.values[v];
    result.records.push_back(std::move(o.line));
  }
  Json s = Json::object();
  s["command"] = command;
  s["scored"] = scored;
  s["skipped_no_answer"] = skipped[static_cast<int>(Skip::kNoAnswer)];
  s["skipped_no_key_tokens"] = skipped[static_cast<int>(Skip::kNoKeyTokens)];
  s["skipped_no_documents"] = skipped[static_cast<int>(Skip::kNoDocuments)];
  s["skipped_empty_query"] = skipped[static_cast<int>(Skip::kEmptyQuery)];
  s["k"] = options.k;
  s["seed"] = options.seed;
  for (std::size_t v = 0; v < names.size(); ++v) s["mean_" + names[v]] = mean_or_null(sums[v], scored);
  result.summary = Json::object();
  result.summary["summary"] = std::move(s);
  return result;
}

}  // namespace

std::uint64_t record_seed(std::uint64_t base_seed, const std::string& record_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : record_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t x = base_seed ^ h;
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

BatchResult run_coco_batch(const Corpus& corpus, const Retriever& retriever, const Scorer& scorer,
                           const BatchOptions& options) {
  auto outcomes = evaluate(corpus, options, [&](const CorpusRecord& rec, Outcome& out) {
    LfqaScore s = coco_lfqa(rec, retriever, options.k, scorer, options.coco);
    Json line = Json::object();
    line["id"] = rec.id;
    line["split"] = std::string(to_string(rec.split));
    line["coco"] = s.scored.coco;
    line["scored_answer"] = to_json(s.scored);
    line["retrieval"] = to_json(s.retrieval);
    out.values = {s.scored.coco};
    out.line = std::move(line);
  });
  return collect("coco", std::move(outcomes), {"coco"}, options);
}

BatchResult run_grounding_batch(const Corpus& corpus, const Retriever& retriever, const DocumentPool& pool,
                                const Scorer& scorer, const BatchOptions& options) {
  auto outcomes = evaluate(corpus, options, [&](const CorpusRecord& rec, Outcome& out) {
    const std::uint64_t seed = record_seed(options.seed, rec.id);
    GroundingResult g = grounding_score(rec, retriever, pool, options.k, scorer, seed, options.coco, options.grounding);
    Json line = Json::object();
    line["id"] = rec.id;
    line["split"] = std::string(to_string(rec.split));
    Json body = to_json(g);
    for (auto it = body.begin(); it != body.end(); ++it) line[it.key()] = it.value();
    out.values = {g.c_topk, g.c_random, g.g};
    out.line = std::move(line);
  });
  return collect("grounding", std::move(outcomes), {"c_topk", "c_random", "g"}, options);
}

std::string to_jsonl(const BatchResult& result) {
  std::string out;
  for (const auto& r : result.records) out += r.dump() + "\n";
  out += result.summary.dump() + "\n";
  return out;
}

}  // namespace groundcheck

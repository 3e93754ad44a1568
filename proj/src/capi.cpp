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

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_set>

#include "groundcheck/batch.hpp"
#include "groundcheck/coco.hpp"
#include "groundcheck/corpus.hpp"
#include "groundcheck/error.hpp"
#include "groundcheck/groundcheck.h"
#include "groundcheck/json_io.hpp"
#include "groundcheck/overlap.hpp"
#include "groundcheck/retrieval.hpp"
#include "groundcheck/simsearch.hpp"
#include "groundcheck/wire.hpp"

namespace gc = groundcheck;

struct gc_corpus {
  gc::Corpus corpus;
};
struct gc_embeddings {
  gc::EmbeddingStore store;
};
struct gc_report {
  gc::OverlapReport report;
};
struct gc_dedup_result {
  gc::DedupResult result;
  gc_corpus purged;
};
struct gc_pool {
  std::shared_ptr<const gc::DocumentPool> pool;
};
struct gc_scorer {
  gc::ScorerHandle scorer;
};

namespace {

thread_local std::string g_last_error;

gc_status to_status(gc::ErrorCode code) {
  using gc::ErrorCode;
  switch (code) {
    case ErrorCode::kIo: return GC_ERR_IO;
    case ErrorCode::kParse: return GC_ERR_PARSE;
    case ErrorCode::kSchema: return GC_ERR_SCHEMA;
    case ErrorCode::kDuplicateId: return GC_ERR_DUPLICATE_ID;
    case ErrorCode::kDim: return GC_ERR_DIM;
    case ErrorCode::kZeroVector: return GC_ERR_ZERO_VECTOR;
    case ErrorCode::kEmptyTarget: return GC_ERR_EMPTY_TARGET;
    case ErrorCode::kBin: return GC_ERR_BIN;
    case ErrorCode::kMissingEmbedding: return GC_ERR_MISSING_EMBEDDING;
    case ErrorCode::kEmptySplit: return GC_ERR_EMPTY_SPLIT;
    case ErrorCode::kReportMismatch: return GC_ERR_REPORT_MISMATCH;
    case ErrorCode::kEmptyInput: return GC_ERR_EMPTY_INPUT;
    case ErrorCode::kConfig: return GC_ERR_CONFIG;
    case ErrorCode::kInvalidRequest: return GC_ERR_INVALID_REQUEST;
    case ErrorCode::kScorerUnavailable: return GC_ERR_SCORER_UNAVAILABLE;
    case ErrorCode::kProtocol: return GC_ERR_PROTOCOL;
    case ErrorCode::kHandshake: return GC_ERR_HANDSHAKE;
    case ErrorCode::kScorerContractViolation: return GC_ERR_SCORER_CONTRACT;
    case ErrorCode::kScorerRemote: return GC_ERR_SCORER_REMOTE;
    case ErrorCode::kEmptyQuery: return GC_ERR_EMPTY_QUERY;
    case ErrorCode::kPoolExhausted: return GC_ERR_POOL_EXHAUSTED;
    case ErrorCode::kMissingDoc: return GC_ERR_MISSING_DOC;
    case ErrorCode::kNoKeyTokens: return GC_ERR_NO_KEY_TOKENS;
    case ErrorCode::kMissingAnswer: return GC_ERR_MISSING_ANSWER;
    case ErrorCode::kInternal: return GC_ERR_INTERNAL;
  }
  return GC_ERR_INTERNAL;
}

template <typename Fn>
gc_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return GC_OK;
  } catch (const gc::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = std::string("InternalError: ") + e.what();
    return GC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "InternalError: unknown exception";
    return GC_ERR_INTERNAL;
  }
}

gc_status null_argument(const char* what) {
  g_last_error = std::string("NullArgument: ") + what;
  return GC_ERR_NULL_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

gc::Split to_split(gc_split s) {
  switch (s) {
    case GC_SPLIT_TRAIN: return gc::Split::kTrain;
    case GC_SPLIT_VALIDATION: return gc::Split::kValidation;
    case GC_SPLIT_TEST: return gc::Split::kTest;
  }
  gc::raise(gc::ErrorCode::kConfig, "unknown split value " + std::to_string(static_cast<int>(s)));
}

gc::ScanOptions to_scan(const gc_scan_options* o) {
  gc::ScanOptions s;
  if (!o) return s;
  s.k = o->k;
  s.tau_flag = o->tau_flag;
  s.bins = o->bins;
  s.block_size = o->block_size;
  s.threads = o->threads;
  return s;
}

std::set<std::string> read_stoplist(const std::string& path) {
  std::ifstream in(path);
  if (!in) gc::raise(gc::ErrorCode::kIo, "cannot open stoplist " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (auto& t : gc::tokenize(line)) words.insert(std::move(t));
  }
  return words;
}

gc::BatchOptions to_batch(const gc_batch_options* o) {
  gc::BatchOptions b;
  gc_batch_options defaults;
  gc_batch_options_default(&defaults);
  if (!o) o = &defaults;
  if (o->k == 0) gc::raise(gc::ErrorCode::kConfig, "k must be at least 1");
  b.k = o->k;
  b.coco.keys.min_len = o->min_key_len;
  if (o->stoplist) {
    const std::string s = o->stoplist;
    if (s == "none") {
      b.coco.keys.stoplist.clear();
    } else {
      b.coco.keys.stoplist = read_stoplist(s);
    }
  }
  if (o->has_split) b.split = to_split(o->split);
  b.seed = o->seed;
  b.threads = o->threads;
  b.grounding.exclude_topk = o->exclude_topk != 0;
  return b;
}

std::unique_ptr<gc::Retriever> make_retriever(gc_retriever_kind kind, const gc_pool* pool) {
  if (kind == GC_RETRIEVER_CORPUS) return std::make_unique<gc::CorpusDocumentsRetriever>();
  if (kind != GC_RETRIEVER_BM25) gc::raise(gc::ErrorCode::kConfig, "unknown retriever kind");
  if (!pool) gc::raise(gc::ErrorCode::kConfig, "the bm25 retriever needs a document pool");
  return std::make_unique<gc::Bm25Retriever>(pool->pool);
}

}  // namespace

extern "C" {

const char* gc_version(void) { return "1.0.0"; }

const char* gc_status_name(gc_status status) {
  switch (status) {
    case GC_OK: return "OK";
    case GC_ERR_NULL_ARGUMENT: return "NullArgument";
    default: break;
  }
  if (status > GC_OK && status <= GC_ERR_INTERNAL) {
    static const gc::ErrorCode kCodes[] = {
        gc::ErrorCode::kIo, gc::ErrorCode::kParse, gc::ErrorCode::kSchema, gc::ErrorCode::kDuplicateId,
        gc::ErrorCode::kDim, gc::ErrorCode::kZeroVector, gc::ErrorCode::kEmptyTarget, gc::ErrorCode::kBin,
        gc::ErrorCode::kMissingEmbedding, gc::ErrorCode::kEmptySplit, gc::ErrorCode::kReportMismatch,
        gc::ErrorCode::kEmptyInput, gc::ErrorCode::kConfig, gc::ErrorCode::kInvalidRequest,
        gc::ErrorCode::kScorerUnavailable, gc::ErrorCode::kProtocol, gc::ErrorCode::kHandshake,
        gc::ErrorCode::kScorerContractViolation, gc::ErrorCode::kScorerRemote, gc::ErrorCode::kEmptyQuery,
        gc::ErrorCode::kPoolExhausted, gc::ErrorCode::kMissingDoc, gc::ErrorCode::kNoKeyTokens,
        gc::ErrorCode::kMissingAnswer, gc::ErrorCode::kInternal};
    return gc::to_string(kCodes[status - 1]).data();
  }
  return "Unknown";
}

const char* gc_last_error(void) { return g_last_error.c_str(); }

void gc_string_free(char* s) { std::free(s); }

gc_status gc_split_parse(const char* name, gc_split* out) {
  if (!name || !out) return null_argument("name/out");
  return guarded([&] { *out = static_cast<gc_split>(gc::parse_split(name)); });
}

// ---- corpus

gc_status gc_corpus_load(const char* path, gc_corpus** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] { *out = new gc_corpus{gc::load_corpus(path)}; });
}

void gc_corpus_free(gc_corpus* corpus) { delete corpus; }

size_t gc_corpus_size(const gc_corpus* corpus) { return corpus ? corpus->corpus.size() : 0; }

size_t gc_corpus_split_size(const gc_corpus* corpus, gc_split split) {
  if (!corpus || split < GC_SPLIT_TRAIN || split > GC_SPLIT_TEST) return 0;
  return corpus->corpus.ids(static_cast<gc::Split>(split)).size();
}

gc_status gc_corpus_to_jsonl(const gc_corpus* corpus, char** out) {
  if (!corpus || !out) return null_argument("corpus/out");
  return guarded([&] {
    std::ostringstream os;
    gc::write_corpus(corpus->corpus, os);
    *out = dup_string(os.str());
  });
}

gc_status gc_tokenize(const char* text, char** out_json) {
  if (!text || !out_json) return null_argument("text/out_json");
  return guarded([&] { *out_json = dup_string(gc::Json(gc::tokenize(text)).dump()); });
}

// ---- embeddings

gc_status gc_embeddings_load(const char* path, gc_embeddings** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] { *out = new gc_embeddings{gc::load_embeddings(path)}; });
}

void gc_embeddings_free(gc_embeddings* embeddings) { delete embeddings; }
size_t gc_embeddings_size(const gc_embeddings* e) { return e ? e->store.size() : 0; }
size_t gc_embeddings_dim(const gc_embeddings* e) { return e ? e->store.dim() : 0; }

size_t gc_embeddings_unmatched(const gc_embeddings* e, const gc_corpus* corpus) {
  if (!e || !corpus) return 0;
  size_t n = 0;
  for (const auto& id : e->store.ids()) {
    if (!corpus->corpus.find(id)) ++n;
  }
  return n;
}

// ---- overlap

void gc_scan_options_default(gc_scan_options* options) {
  if (!options) return;
  const gc::ScanOptions d;
  options->k = d.k;
  options->tau_flag = d.tau_flag;
  options->bins = d.bins;
  options->block_size = d.block_size;
  options->threads = d.threads;
}

gc_status gc_overlap_scan(const gc_corpus* corpus, const gc_embeddings* embeddings, gc_split source,
                          gc_split target, const gc_scan_options* options, gc_report** out) {
  if (!corpus || !embeddings || !out) return null_argument("corpus/embeddings/out");
  return guarded([&] {
    *out = new gc_report{gc::scan(corpus->corpus, embeddings->store, to_split(source), to_split(target),
                                  to_scan(options))};
  });
}

gc_status gc_report_parse(const char* json, gc_report** out) {
  if (!json || !out) return null_argument("json/out");
  return guarded([&] {
    gc::Json j;
    try {
      j = gc::Json::parse(json);
    } catch (const gc::Json::parse_error& e) {
      gc::raise(gc::ErrorCode::kParse, std::string("report: ") + e.what());
    }
    *out = new gc_report{gc::report_from_json(j)};
  });
}

gc_status gc_report_load(const char* path, gc_report** out) {
  if (!path || !out) return null_argument("path/out");
  std::ifstream in(path);
  if (!in) {
    g_last_error = std::string("IoError: cannot open report ") + path;
    return GC_ERR_IO;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return gc_report_parse(buf.str().c_str(), out);
}

void gc_report_free(gc_report* report) { delete report; }
size_t gc_report_k(const gc_report* r) { return r ? r->report.k : 0; }
double gc_report_flagged_fraction(const gc_report* r) { return r ? r->report.flagged_fraction : 0.0; }

gc_status gc_report_to_json(const gc_report* report, char** out) {
  if (!report || !out) return null_argument("report/out");
  return guarded([&] { *out = dup_string(gc::to_json(report->report).dump(2) + "\n"); });
}

gc_status gc_report_density_csv(const gc_report* report, size_t k, char** out) {
  if (!report || !out) return null_argument("report/out");
  return guarded([&] { *out = dup_string(gc::density_csv(report->report, k)); });
}

gc_status gc_compare_reports(const gc_report* old_report, const gc_report* new_report, char** out_json) {
  if (!old_report || !new_report || !out_json) return null_argument("old/new/out");
  return guarded([&] {
    const auto cmp = gc::compare_versions(old_report->report, new_report->report);
    *out_json = dup_string(gc::to_json(cmp).dump(2) + "\n");
  });
}

// ---- dedup

void gc_dedup_options_default(gc_dedup_options* options) {
  if (!options) return;
  gc_scan_options_default(&options->scan);
  options->tau_cluster = gc::kDefaultTauCluster;
  options->policy = GC_POLICY_PURGE_EVAL;
}

gc_status gc_policy_parse(const char* name, gc_policy* out) {
  if (!name || !out) return null_argument("name/out");
  return guarded([&] {
    *out = gc::parse_policy(name) == gc::PurgePolicy::kKeepOne ? GC_POLICY_KEEP_ONE : GC_POLICY_PURGE_EVAL;
  });
}

gc_status gc_dedup(const gc_corpus* corpus, const gc_embeddings* embeddings, const gc_dedup_options* options,
                   gc_dedup_result** out) {
  if (!corpus || !embeddings || !out) return null_argument("corpus/embeddings/out");
  return guarded([&] {
    gc::DedupOptions opts;
    if (options) {
      opts.scan = to_scan(&options->scan);
      opts.tau_cluster = options->tau_cluster;
      switch (options->policy) {
        case GC_POLICY_PURGE_EVAL: opts.policy = gc::PurgePolicy::kPurgeEval; break;
        case GC_POLICY_KEEP_ONE: opts.policy = gc::PurgePolicy::kKeepOne; break;
        default: gc::raise(gc::ErrorCode::kConfig, "unknown purge policy");
      }
    }
    auto result = std::make_unique<gc_dedup_result>();
    result->result = gc::dedup(corpus->corpus, embeddings->store, opts);
    result->purged.corpus = result->result.purged.corpus;
    *out = result.release();
  });
}

void gc_dedup_free(gc_dedup_result* result) { delete result; }

const gc_corpus* gc_dedup_corpus(const gc_dedup_result* result) { return result ? &result->purged : nullptr; }

size_t gc_dedup_removed(const gc_dedup_result* result, gc_split split) {
  if (!result) return 0;
  size_t n = 0;
  for (const auto& r : result->result.purged.log) {
    if (static_cast<int>(r.split) == static_cast<int>(split)) ++n;
  }
  return n;
}

size_t gc_dedup_clusters_formed(const gc_dedup_result* result) {
  if (!result) return 0;
  size_t n = 0;
  for (const auto& c : result->result.clusters.clusters) {
    if (c.size() > 1) ++n;
  }
  return n;
}

gc_status gc_dedup_log_jsonl(const gc_dedup_result* result, char** out) {
  if (!result || !out) return null_argument("result/out");
  return guarded([&] {
    std::string s;
    for (const auto& r : result->result.purged.log) s += gc::to_json(r).dump() + "\n";
    *out = dup_string(s);
  });
}

gc_status gc_dedup_summary_json(const gc_dedup_result* result, char** out) {
  if (!result || !out) return null_argument("result/out");
  return guarded([&] {
    const auto& r = result->result;
    gc::Json j = gc::Json::object();
    j["candidates"] = r.candidates.size();
    j["clusters_formed"] = gc_dedup_clusters_formed(result);
    gc::Json removed = gc::Json::object();
    for (auto split : gc::kAllSplits) {
      removed[std::string(gc::to_string(split))] = gc_dedup_removed(result, static_cast<gc_split>(split));
    }
    j["removed"] = std::move(removed);
    j["records_before"] = r.purged.log.size() + r.purged.corpus.size();
    j["records_after"] = r.purged.corpus.size();
    j["clusters"] = gc::to_json(r.clusters);
    gc::Json scans = gc::Json::array();
    for (const auto& s : r.scans) {
      scans.push_back({{"source", std::string(gc::to_string(s.pair.source))},
                       {"target", std::string(gc::to_string(s.pair.target))},
                       {"flagged_fraction", s.flagged_fraction},
                       {"flagged_pairs", s.flagged.size()}});
    }
    j["scans"] = std::move(scans);
    *out = dup_string(j.dump(2) + "\n");
  });
}

// ---- scorers

void gc_scorer_options_default(gc_scorer_options* options) {
  if (!options) return;
  const gc::ScorerConfig rc;
  const gc::ExternalOptions ec;
  options->lambda = rc.lambda;
  options->alpha = rc.alpha;
  options->timeout_ms = static_cast<unsigned>(ec.timeout.count());
  options->pool_size = ec.pool_size;
}

gc_status gc_scorer_create(const char* spec, const gc_scorer_options* options, gc_scorer** out) {
  if (!spec || !out) return null_argument("spec/out");
  return guarded([&] {
    gc_scorer_options o;
    gc_scorer_options_default(&o);
    if (options) o = *options;
    gc::ScorerConfig rc{o.lambda, o.alpha};
    gc::ExternalOptions ec;
    ec.timeout = std::chrono::milliseconds(o.timeout_ms);
    ec.pool_size = o.pool_size == 0 ? 1 : o.pool_size;
    *out = new gc_scorer{gc::make_scorer(spec, rc, ec)};
  });
}

void gc_scorer_free(gc_scorer* scorer) { delete scorer; }

gc_status gc_scorer_name(const gc_scorer* scorer, char** out) {
  if (!scorer || !out) return null_argument("scorer/out");
  return guarded([&] { *out = dup_string(scorer->scorer->name()); });
}

gc_status gc_score(const gc_scorer* scorer, const char* source, const char* const* answer_tokens, size_t n_tokens,
                   const size_t* key_indices, size_t n_keys, double* out_probs) {
  if (!scorer || !source || (n_tokens && !answer_tokens) || (n_keys && (!key_indices || !out_probs))) {
    return null_argument("scorer/source/tokens/keys/out");
  }
  return guarded([&] {
    gc::ScoreRequest req;
    req.source = source;
    for (size_t i = 0; i < n_tokens; ++i) {
      if (!answer_tokens[i]) gc::raise(gc::ErrorCode::kInvalidRequest, "null answer token");
      req.answer_tokens.emplace_back(answer_tokens[i]);
    }
    req.key_indices.assign(key_indices, key_indices + n_keys);
    const auto probs = gc::score(req, *scorer->scorer);
    std::copy(probs.probs.begin(), probs.probs.end(), out_probs);
  });
}

// ---- retrieval and metrics

gc_status gc_pool_load(const char* path, gc_pool** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] { *out = new gc_pool{std::make_shared<const gc::DocumentPool>(gc::load_pool(path))}; });
}

void gc_pool_free(gc_pool* pool) { delete pool; }
size_t gc_pool_size(const gc_pool* pool) { return pool ? pool->pool->size() : 0; }

void gc_batch_options_default(gc_batch_options* options) {
  if (!options) return;
  const gc::BatchOptions d;
  options->retriever = GC_RETRIEVER_BM25;
  options->k = d.k;
  options->min_key_len = d.coco.keys.min_len;
  options->stoplist = nullptr;
  options->has_split = 0;
  options->split = GC_SPLIT_TRAIN;
  options->seed = d.seed;
  options->threads = d.threads;
  options->exclude_topk = 1;
}

gc_status gc_coco_batch(const gc_corpus* corpus, const gc_pool* pool, const gc_scorer* scorer,
                        const gc_batch_options* options, char** out_jsonl) {
  if (!corpus || !scorer || !out_jsonl) return null_argument("corpus/scorer/out");
  return guarded([&] {
    const auto batch = to_batch(options);
    const auto retriever = make_retriever(options ? options->retriever : GC_RETRIEVER_BM25, pool);
    *out_jsonl = dup_string(gc::to_jsonl(gc::run_coco_batch(corpus->corpus, *retriever, *scorer->scorer, batch)));
  });
}

gc_status gc_grounding_batch(const gc_corpus* corpus, const gc_pool* pool, const gc_scorer* scorer,
                             const gc_batch_options* options, char** out_jsonl) {
  if (!corpus || !pool || !scorer || !out_jsonl) return null_argument("corpus/pool/scorer/out");
  return guarded([&] {
    const auto batch = to_batch(options);
    const auto retriever = make_retriever(options ? options->retriever : GC_RETRIEVER_BM25, pool);
    *out_jsonl = dup_string(
        gc::to_jsonl(gc::run_grounding_batch(corpus->corpus, *retriever, *pool->pool, *scorer->scorer, batch)));
  });
}

gc_status gc_coco_summarization(const char* source, const char* summary, const gc_scorer* scorer,
                                double* out_coco) {
  if (!source || !summary || !scorer || !out_coco) return null_argument("source/summary/scorer/out");
  return guarded([&] { *out_coco = gc::coco_summarization(source, summary, *scorer->scorer).coco; });
}

}  // extern "C"

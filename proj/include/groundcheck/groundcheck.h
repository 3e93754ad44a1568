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

/*
 * C interface to groundcheck. Every object is an opaque handle released by
 * its matching *_free function. Functions that can fail return gc_status;
 * on failure gc_last_error() describes the problem (per thread, valid until
 * the next failing call on that thread). Strings returned through char**
 * are heap-allocated and must be released with gc_string_free.
 */
#ifndef GROUNDCHECK_H
#define GROUNDCHECK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define GC_API __declspec(dllexport)
#else
#  define GC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gc_status {
  GC_OK = 0,
  GC_ERR_IO,
  GC_ERR_PARSE,
  GC_ERR_SCHEMA,
  GC_ERR_DUPLICATE_ID,
  GC_ERR_DIM,
  GC_ERR_ZERO_VECTOR,
  GC_ERR_EMPTY_TARGET,
  GC_ERR_BIN,
  GC_ERR_MISSING_EMBEDDING,
  GC_ERR_EMPTY_SPLIT,
  GC_ERR_REPORT_MISMATCH,
  GC_ERR_EMPTY_INPUT,
  GC_ERR_CONFIG,
  GC_ERR_INVALID_REQUEST,
  GC_ERR_SCORER_UNAVAILABLE,
  GC_ERR_PROTOCOL,
  GC_ERR_HANDSHAKE,
  GC_ERR_SCORER_CONTRACT,
  GC_ERR_SCORER_REMOTE,
  GC_ERR_EMPTY_QUERY,
  GC_ERR_POOL_EXHAUSTED,
  GC_ERR_MISSING_DOC,
  GC_ERR_NO_KEY_TOKENS,
  GC_ERR_MISSING_ANSWER,
  GC_ERR_INTERNAL,
  GC_ERR_NULL_ARGUMENT
} gc_status;

typedef enum gc_split { GC_SPLIT_TRAIN = 0, GC_SPLIT_VALIDATION = 1, GC_SPLIT_TEST = 2 } gc_split;
typedef enum gc_policy { GC_POLICY_PURGE_EVAL = 0, GC_POLICY_KEEP_ONE = 1 } gc_policy;
typedef enum gc_retriever_kind { GC_RETRIEVER_BM25 = 0, GC_RETRIEVER_CORPUS = 1 } gc_retriever_kind;

typedef struct gc_corpus gc_corpus;
typedef struct gc_embeddings gc_embeddings;
typedef struct gc_report gc_report;
typedef struct gc_dedup_result gc_dedup_result;
typedef struct gc_pool gc_pool;
typedef struct gc_scorer gc_scorer;

GC_API const char* gc_version(void);
GC_API const char* gc_status_name(gc_status status);
GC_API const char* gc_last_error(void);
GC_API void gc_string_free(char* s);

/* Parses a split name ("train", "validation", "test"). */
GC_API gc_status gc_split_parse(const char* name, gc_split* out);

/* ---- corpus ----------------------------------------------------------- */

GC_API gc_status gc_corpus_load(const char* path, gc_corpus** out);
GC_API void gc_corpus_free(gc_corpus* corpus);
GC_API size_t gc_corpus_size(const gc_corpus* corpus);
GC_API size_t gc_corpus_split_size(const gc_corpus* corpus, gc_split split);
GC_API gc_status gc_corpus_to_jsonl(const gc_corpus* corpus, char** out);
/* Tokens of `text` as a JSON array of strings. */
GC_API gc_status gc_tokenize(const char* text, char** out_json);

/* ---- embeddings ------------------------------------------------------- */

GC_API gc_status gc_embeddings_load(const char* path, gc_embeddings** out);
GC_API void gc_embeddings_free(gc_embeddings* embeddings);
GC_API size_t gc_embeddings_size(const gc_embeddings* embeddings);
GC_API size_t gc_embeddings_dim(const gc_embeddings* embeddings);
/* Number of embedding ids with no corpus record. */
GC_API size_t gc_embeddings_unmatched(const gc_embeddings* embeddings, const gc_corpus* corpus);

/* ---- overlap scans ---------------------------------------------------- */

typedef struct gc_scan_options {
  size_t k;
  double tau_flag;
  size_t bins;
  size_t block_size;
  unsigned threads; /* 0 = hardware concurrency */
} gc_scan_options;

GC_API void gc_scan_options_default(gc_scan_options* options);
GC_API gc_status gc_overlap_scan(const gc_corpus* corpus, const gc_embeddings* embeddings, gc_split source,
                                 gc_split target, const gc_scan_options* options, gc_report** out);
GC_API gc_status gc_report_parse(const char* json, gc_report** out);
GC_API gc_status gc_report_load(const char* path, gc_report** out);
GC_API void gc_report_free(gc_report* report);
GC_API size_t gc_report_k(const gc_report* report);
GC_API double gc_report_flagged_fraction(const gc_report* report);
GC_API gc_status gc_report_to_json(const gc_report* report, char** out);
GC_API gc_status gc_report_density_csv(const gc_report* report, size_t k, char** out);
GC_API gc_status gc_compare_reports(const gc_report* old_report, const gc_report* new_report, char** out_json);

/* ---- dedup ------------------------------------------------------------ */

typedef struct gc_dedup_options {
  gc_scan_options scan;
  double tau_cluster;
  gc_policy policy;
} gc_dedup_options;

GC_API void gc_dedup_options_default(gc_dedup_options* options);
GC_API gc_status gc_policy_parse(const char* name, gc_policy* out);
GC_API gc_status gc_dedup(const gc_corpus* corpus, const gc_embeddings* embeddings, const gc_dedup_options* options,
                          gc_dedup_result** out);
GC_API void gc_dedup_free(gc_dedup_result* result);
/* Borrowed; lives as long as the result. */
GC_API const gc_corpus* gc_dedup_corpus(const gc_dedup_result* result);
GC_API size_t gc_dedup_removed(const gc_dedup_result* result, gc_split split);
GC_API size_t gc_dedup_clusters_formed(const gc_dedup_result* result);
GC_API gc_status gc_dedup_log_jsonl(const gc_dedup_result* result, char** out);
GC_API gc_status gc_dedup_summary_json(const gc_dedup_result* result, char** out);

/* ---- scorers ---------------------------------------------------------- */

typedef struct gc_scorer_options {
  double lambda; /* reference scorer bigram weight */
  double alpha;  /* reference scorer smoothing */
  unsigned timeout_ms;
  size_t pool_size;
} gc_scorer_options;

GC_API void gc_scorer_options_default(gc_scorer_options* options);
/* spec: "reference" or "external:<command>" or "external:tcp://host:port". */
GC_API gc_status gc_scorer_create(const char* spec, const gc_scorer_options* options, gc_scorer** out);
GC_API void gc_scorer_free(gc_scorer* scorer);
GC_API gc_status gc_scorer_name(const gc_scorer* scorer, char** out);
/* Writes n_keys probabilities into out_probs. */
GC_API gc_status gc_score(const gc_scorer* scorer, const char* source, const char* const* answer_tokens,
                          size_t n_tokens, const size_t* key_indices, size_t n_keys, double* out_probs);

/* ---- retrieval and metrics -------------------------------------------- */

GC_API gc_status gc_pool_load(const char* path, gc_pool** out);
GC_API void gc_pool_free(gc_pool* pool);
GC_API size_t gc_pool_size(const gc_pool* pool);

typedef struct gc_batch_options {
  gc_retriever_kind retriever;
  size_t k;
  size_t min_key_len;
  const char* stoplist; /* NULL: built-in list, "none": no stoplist, else a file with one word per line */
  int has_split;
  gc_split split;
  uint64_t seed;
  unsigned threads;
  int exclude_topk; /* grounding: random draw avoids retrieved documents */
} gc_batch_options;

GC_API void gc_batch_options_default(gc_batch_options* options);
/* pool may be NULL with the corpus retriever. Output is JSONL ending with a summary line. */
GC_API gc_status gc_coco_batch(const gc_corpus* corpus, const gc_pool* pool, const gc_scorer* scorer,
                               const gc_batch_options* options, char** out_jsonl);
GC_API gc_status gc_grounding_batch(const gc_corpus* corpus, const gc_pool* pool, const gc_scorer* scorer,
                                    const gc_batch_options* options, char** out_jsonl);
GC_API gc_status gc_coco_summarization(const char* source, const char* summary, const gc_scorer* scorer,
                                       double* out_coco);

#ifdef __cplusplus
}
#endif

#endif /* GROUNDCHECK_H */

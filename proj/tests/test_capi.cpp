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

// Exercises the shared library through its C interface only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "groundcheck/groundcheck.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    char tmpl[] = "/tmp/gc_capi_XXXXXX";
    path = ::mkdtemp(tmpl);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  gc_string_free(s);
  return out;
}

const char* kCorpus =
    R"({"id":"t1","split":"train","question":"capital of france","answer":"Paris is the capital of France."})"
    "\n"
    R"({"id":"t2","split":"train","question":"largest ocean","answer":"The Pacific."})"
    "\n"
    R"({"id":"v1","split":"validation","question":"capital city of france","answer":"Paris."})"
    "\n"
    R"({"id":"v2","split":"validation","question":"tallest mountain","answer":"Everest."})"
    "\n";
const char* kEmbeddings =
    R"({"id":"t1","vector":[1,0,0]})"
    "\n"
    R"({"id":"t2","vector":[0,1,0]})"
    "\n"
    R"({"id":"v1","vector":[1,0.01,0]})"
    "\n"
    R"({"id":"v2","vector":[0,0,1]})"
    "\n"
    R"({"id":"extra","vector":[0,1,1]})"
    "\n";
const char* kPool =
    R"({"doc_id":"p1","text":"Paris is the capital and largest city of France."})"
    "\n"
    R"({"doc_id":"p2","text":"The Pacific is the largest ocean."})"
    "\n"
    R"({"doc_id":"p3","text":"Mount Everest is the tallest mountain."})"
    "\n";

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(gc_version()).size() > 0);
  CHECK(std::string(gc_status_name(GC_OK)) == "OK");
  CHECK(std::string(gc_status_name(GC_ERR_DUPLICATE_ID)) == "DuplicateId");
}

TEST_CASE("null arguments are rejected, not dereferenced") {
  gc_corpus* c = nullptr;
  CHECK(gc_corpus_load(nullptr, &c) == GC_ERR_NULL_ARGUMENT);
  CHECK(gc_corpus_load("x", nullptr) == GC_ERR_NULL_ARGUMENT);
  gc_corpus_free(nullptr);
  gc_string_free(nullptr);
}

TEST_CASE("load errors carry a status and a message") {
  TempDir dir;
  gc_corpus* c = nullptr;
  CHECK(gc_corpus_load((dir.path / "missing.jsonl").c_str(), &c) == GC_ERR_IO);
  CHECK(c == nullptr);
  CHECK(std::string(gc_last_error()).find("missing.jsonl") != std::string::npos);
  const auto dup = dir.write("dup.jsonl", R"({"id":"a","split":"train","question":"q"})"
                                          "\n"
                                          R"({"id":"a","split":"test","question":"q"})"
                                          "\n");
  CHECK(gc_corpus_load(dup.c_str(), &c) == GC_ERR_DUPLICATE_ID);
}

TEST_CASE("scan, report round trip and comparison") {
  TempDir dir;
  gc_corpus* corpus = nullptr;
  REQUIRE(gc_corpus_load(dir.write("c.jsonl", kCorpus).c_str(), &corpus) == GC_OK);
  CHECK(gc_corpus_size(corpus) == 4);
  CHECK(gc_corpus_split_size(corpus, GC_SPLIT_VALIDATION) == 2);
  gc_embeddings* emb = nullptr;
  REQUIRE(gc_embeddings_load(dir.write("e.jsonl", kEmbeddings).c_str(), &emb) == GC_OK);
  CHECK(gc_embeddings_dim(emb) == 3);
  CHECK(gc_embeddings_unmatched(emb, corpus) == 1);

  gc_scan_options opts;
  gc_scan_options_default(&opts);
  opts.k = 2;
  gc_report* report = nullptr;
  REQUIRE(gc_overlap_scan(corpus, emb, GC_SPLIT_VALIDATION, GC_SPLIT_TRAIN, &opts, &report) == GC_OK);
  CHECK(gc_report_k(report) == 2);
  CHECK(gc_report_flagged_fraction(report) == 0.5);

  char* json = nullptr;
  REQUIRE(gc_report_to_json(report, &json) == GC_OK);
  const std::string text = take(json);
  gc_report* parsed = nullptr;
  REQUIRE(gc_report_parse(text.c_str(), &parsed) == GC_OK);
  REQUIRE(gc_report_to_json(parsed, &json) == GC_OK);
  CHECK(take(json) == text);

  char* csv = nullptr;
  REQUIRE(gc_report_density_csv(report, 1, &csv) == GC_OK);
  CHECK(take(csv).rfind("bin_lower,bin_upper,density\n", 0) == 0);
  CHECK(gc_report_density_csv(report, 3, &csv) == GC_ERR_REPORT_MISMATCH);

  char* cmp = nullptr;
  REQUIRE(gc_compare_reports(report, parsed, &cmp) == GC_OK);
  const std::string cmp_text = take(cmp);
  INFO(cmp_text);
  CHECK(cmp_text.find("\"overlap_coefficient\": 1.0") != std::string::npos);

  gc_report* other = nullptr;
  REQUIRE(gc_overlap_scan(corpus, emb, GC_SPLIT_TRAIN, GC_SPLIT_VALIDATION, &opts, &other) == GC_OK);
  CHECK(gc_compare_reports(report, other, &cmp) == GC_ERR_REPORT_MISMATCH);
  CHECK(gc_overlap_scan(corpus, emb, GC_SPLIT_TEST, GC_SPLIT_TRAIN, &opts, &other) == GC_ERR_EMPTY_SPLIT);

  gc_report_free(other);
  gc_report_free(parsed);
  gc_report_free(report);
  gc_embeddings_free(emb);
  gc_corpus_free(corpus);
}

TEST_CASE("dedup through the C API") {
  TempDir dir;
  gc_corpus* corpus = nullptr;
  REQUIRE(gc_corpus_load(dir.write("c.jsonl", kCorpus).c_str(), &corpus) == GC_OK);
  gc_embeddings* emb = nullptr;
  REQUIRE(gc_embeddings_load(dir.write("e.jsonl", kEmbeddings).c_str(), &emb) == GC_OK);
  gc_dedup_options opts;
  gc_dedup_options_default(&opts);
  CHECK(opts.policy == GC_POLICY_PURGE_EVAL);
  gc_dedup_result* result = nullptr;
  REQUIRE(gc_dedup(corpus, emb, &opts, &result) == GC_OK);
  CHECK(gc_dedup_clusters_formed(result) == 1);
  CHECK(gc_dedup_removed(result, GC_SPLIT_VALIDATION) == 1);
  CHECK(gc_dedup_removed(result, GC_SPLIT_TRAIN) == 0);
  CHECK(gc_corpus_size(gc_dedup_corpus(result)) == 3);
  char* log = nullptr;
  REQUIRE(gc_dedup_log_jsonl(result, &log) == GC_OK);
  CHECK(take(log).find("\"removed_id\":\"v1\"") != std::string::npos);
  gc_policy p;
  CHECK(gc_policy_parse("keep_one", &p) == GC_OK);
  CHECK(p == GC_POLICY_KEEP_ONE);
  CHECK(gc_policy_parse("nope", &p) == GC_ERR_CONFIG);
  gc_dedup_free(result);
  gc_embeddings_free(emb);
  gc_corpus_free(corpus);
}

TEST_CASE("scoring and metrics") {
  TempDir dir;
  gc_scorer_options so;
  gc_scorer_options_default(&so);
  so.lambda = 0.0;
  gc_scorer* scorer = nullptr;
  REQUIRE(gc_scorer_create("reference", &so, &scorer) == GC_OK);
  const char* tokens[] = {"a"};
  const size_t keys[] = {0};
  double prob = 0.0;
  REQUIRE(gc_score(scorer, "a b a", tokens, 1, keys, 1, &prob) == GC_OK);
  CHECK(prob == doctest::Approx(3.0 / 7));
  const size_t bad_keys[] = {3};
  CHECK(gc_score(scorer, "a b a", tokens, 1, bad_keys, 1, &prob) == GC_ERR_INVALID_REQUEST);

  double coco = -1.0;
  REQUIRE(gc_coco_summarization("Everest is tall", "Everest", scorer, &coco) == GC_OK);
  CHECK(coco > 0.0);
  CHECK(gc_coco_summarization("x", "the", scorer, &coco) == GC_ERR_NO_KEY_TOKENS);

  gc_corpus* corpus = nullptr;
  REQUIRE(gc_corpus_load(dir.write("c.jsonl", kCorpus).c_str(), &corpus) == GC_OK);
  gc_pool* pool = nullptr;
  REQUIRE(gc_pool_load(dir.write("p.jsonl", kPool).c_str(), &pool) == GC_OK);
  CHECK(gc_pool_size(pool) == 3);

  gc_batch_options bo;
  gc_batch_options_default(&bo);
  bo.k = 1;
  char* out = nullptr;
  REQUIRE(gc_coco_batch(corpus, pool, scorer, &bo, &out) == GC_OK);
  const std::string lines = take(out);
  CHECK(lines.find("\"command\":\"coco\"") != std::string::npos);
  CHECK(lines.find("\"scored\":4") != std::string::npos);

  REQUIRE(gc_grounding_batch(corpus, pool, scorer, &bo, &out) == GC_OK);
  const std::string g1 = take(out);
  REQUIRE(gc_grounding_batch(corpus, pool, scorer, &bo, &out) == GC_OK);
  CHECK(take(out) == g1);
  bo.k = 3;
  CHECK(gc_grounding_batch(corpus, pool, scorer, &bo, &out) == GC_ERR_POOL_EXHAUSTED);

  bo.retriever = GC_RETRIEVER_BM25;
  CHECK(gc_coco_batch(corpus, nullptr, scorer, &bo, &out) == GC_ERR_CONFIG);

  CHECK(gc_scorer_create("bogus", &so, &scorer) == GC_ERR_CONFIG);
  CHECK(gc_scorer_create("external:/nonexistent/peer", &so, &scorer) == GC_ERR_SCORER_UNAVAILABLE);

  gc_pool_free(pool);
  gc_corpus_free(corpus);
  gc_scorer_free(scorer);
}

TEST_CASE("tokenizer is exposed") {
  char* json = nullptr;
  REQUIRE(gc_tokenize("Hello, World", &json) == GC_OK);
  CHECK(take(json) == R"(["hello","world"])");
}

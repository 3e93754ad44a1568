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

// groundcheck command-line front end. Links only the C API.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "groundcheck/groundcheck.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitExternal = 3;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(gc_status status) {
  switch (status) {
    case GC_OK: return kExitOk;
    case GC_ERR_SCORER_UNAVAILABLE:
    case GC_ERR_PROTOCOL:
    case GC_ERR_HANDSHAKE:
    case GC_ERR_SCORER_CONTRACT:
    case GC_ERR_SCORER_REMOTE: return kExitExternal;
    case GC_ERR_INTERNAL:
    case GC_ERR_NULL_ARGUMENT: return kExitInternal;
    default: return kExitUsage;
  }
}

void check(gc_status status) {
  if (status != GC_OK) throw Failure{exit_code_for(status), gc_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using CorpusPtr = std::unique_ptr<gc_corpus, Deleter<gc_corpus, gc_corpus_free>>;
using EmbeddingsPtr = std::unique_ptr<gc_embeddings, Deleter<gc_embeddings, gc_embeddings_free>>;
using ReportPtr = std::unique_ptr<gc_report, Deleter<gc_report, gc_report_free>>;
using DedupPtr = std::unique_ptr<gc_dedup_result, Deleter<gc_dedup_result, gc_dedup_free>>;
using PoolPtr = std::unique_ptr<gc_pool, Deleter<gc_pool, gc_pool_free>>;
using ScorerPtr = std::unique_ptr<gc_scorer, Deleter<gc_scorer, gc_scorer_free>>;

// Takes ownership of a C string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  gc_string_free(s);
  return out;
}

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw Failure{kExitUsage, std::string(flag) + " is required"};
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw Failure{kExitUsage, std::string(flag) + ": no such file: " + path};
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Failure{kExitUsage, "--out: cannot create directory " + dir};
  return fs::path(dir);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{kExitUsage, "cannot write " + path.string()};
  out << content;
  if (!out.flush()) throw Failure{kExitUsage, "cannot write " + path.string()};
}

gc_split split_of(const std::string& name) {
  gc_split s;
  check(gc_split_parse(name.c_str(), &s));
  return s;
}

CorpusPtr load_corpus(const std::string& path) {
  gc_corpus* c = nullptr;
  check(gc_corpus_load(path.c_str(), &c));
  return CorpusPtr(c);
}

EmbeddingsPtr load_embeddings(const std::string& path, const gc_corpus* corpus) {
  gc_embeddings* e = nullptr;
  check(gc_embeddings_load(path.c_str(), &e));
  EmbeddingsPtr out(e);
  if (const size_t n = gc_embeddings_unmatched(e, corpus); n > 0) {
    std::cerr << "warning: " << n << " embedding id(s) have no corpus record\n";
  }
  return out;
}

struct ScanFlags {
  std::string corpus;
  std::string embeddings;
  std::string out = ".";
  std::size_t k = 3;
  double tau_flag = 0.9;
  std::size_t bins = 40;
  unsigned threads = 1;
};

void validate_scan(const ScanFlags& f) {
  require_file(f.corpus, "--corpus");
  require_file(f.embeddings, "--embeddings");
  if (f.k == 0) throw Failure{kExitUsage, "--k must be at least 1"};
  if (f.bins == 0) throw Failure{kExitUsage, "--bins must be at least 1"};
  if (!(f.tau_flag >= -1.0 && f.tau_flag <= 1.0)) throw Failure{kExitUsage, "--tau-flag must lie in [-1, 1]"};
}

gc_scan_options scan_options(const ScanFlags& f) {
  gc_scan_options o;
  gc_scan_options_default(&o);
  o.k = f.k;
  o.tau_flag = f.tau_flag;
  o.bins = f.bins;
  o.threads = f.threads;
  return o;
}

int run_overlap_scan(const ScanFlags& f, const std::string& source, const std::string& target) {
  validate_scan(f);
  const gc_split src = split_of(source);
  const gc_split tgt = split_of(target);
  const fs::path out = prepare_out_dir(f.out);
  auto corpus = load_corpus(f.corpus);
  auto emb = load_embeddings(f.embeddings, corpus.get());
  const gc_scan_options opts = scan_options(f);

  gc_report* raw = nullptr;
  check(gc_overlap_scan(corpus.get(), emb.get(), src, tgt, &opts, &raw));
  ReportPtr report(raw);
  char* json = nullptr;
  check(gc_report_to_json(report.get(), &json));
  write_file(out / "overlap_report.json", take(json));
  for (std::size_t k = 1; k <= f.k; ++k) {
    char* csv = nullptr;
    check(gc_report_density_csv(report.get(), k, &csv));
    write_file(out / ("density_k" + std::to_string(k) + ".csv"), take(csv));
  }
  std::cout << source << " -> " << target << ": flagged_fraction " << gc_report_flagged_fraction(report.get())
            << " at tau_flag " << f.tau_flag << "\n";
  return kExitOk;
}

int run_dedup(const ScanFlags& f, double tau_cluster, const std::string& policy_name) {
  gc_policy policy;
  if (gc_policy_parse(policy_name.c_str(), &policy) != GC_OK) {
    throw Failure{kExitUsage, "--policy must be purge_eval or keep_one"};
  }
  validate_scan(f);
  if (!(tau_cluster > 0.0 && tau_cluster <= 1.0)) throw Failure{kExitUsage, "--tau-cluster must lie in (0, 1]"};
  if (f.tau_flag > tau_cluster) {
    std::cerr << "warning: --tau-flag above --tau-cluster can leave pairs above tau-cluster unpurged\n";
  }
  const fs::path out = prepare_out_dir(f.out);
  auto corpus = load_corpus(f.corpus);
  auto emb = load_embeddings(f.embeddings, corpus.get());

  gc_dedup_options opts;
  gc_dedup_options_default(&opts);
  opts.scan = scan_options(f);
  opts.tau_cluster = tau_cluster;
  opts.policy = policy;
  gc_dedup_result* raw = nullptr;
  check(gc_dedup(corpus.get(), emb.get(), &opts, &raw));
  DedupPtr result(raw);

  char* s = nullptr;
  check(gc_corpus_to_jsonl(gc_dedup_corpus(result.get()), &s));
  write_file(out / "purged_corpus.jsonl", take(s));
  check(gc_dedup_log_jsonl(result.get(), &s));
  write_file(out / "removal_log.jsonl", take(s));
  check(gc_dedup_summary_json(result.get(), &s));
  write_file(out / "dedup_summary.json", take(s));

  std::cout << "clusters formed: " << gc_dedup_clusters_formed(result.get()) << "\n"
            << "removed: train " << gc_dedup_removed(result.get(), GC_SPLIT_TRAIN) << ", validation "
            << gc_dedup_removed(result.get(), GC_SPLIT_VALIDATION) << ", test "
            << gc_dedup_removed(result.get(), GC_SPLIT_TEST) << "\n";
  return kExitOk;
}

struct MetricFlags {
  std::string corpus;
  std::string pool;
  std::string out = ".";
  std::string scorer;
  std::string retriever = "bm25";
  std::string stoplist = "default";
  std::string split;
  std::size_t k = 5;
  std::size_t min_key_len = 2;
  std::uint64_t seed = 0;
  double lambda = 0.5;
  double alpha = 1.0;
  unsigned timeout_ms = 30000;
  unsigned threads = 1;
  bool include_topk = false;
};

std::string scorer_spec(const MetricFlags& f) {
  if (!f.scorer.empty()) return f.scorer;
  if (const char* env = std::getenv("GROUNDCHECK_SCORER"); env && *env) return env;
  return "reference";
}

int run_metric(const MetricFlags& f, bool grounding) {
  require_file(f.corpus, "--corpus");
  gc_batch_options opts;
  gc_batch_options_default(&opts);
  if (f.retriever == "bm25") {
    opts.retriever = GC_RETRIEVER_BM25;
  } else if (f.retriever == "corpus") {
    opts.retriever = GC_RETRIEVER_CORPUS;
  } else {
    throw Failure{kExitUsage, "--retriever must be bm25 or corpus"};
  }
  if (grounding || opts.retriever == GC_RETRIEVER_BM25) require_file(f.pool, "--pool");
  if (f.k == 0) throw Failure{kExitUsage, "--k must be at least 1"};
  if (f.stoplist != "default" && f.stoplist != "none") require_file(f.stoplist, "--stoplist");
  const std::string spec = scorer_spec(f);
  if (spec != "reference" && spec.rfind("external:", 0) != 0) {
    throw Failure{kExitUsage, "--scorer must be 'reference' or 'external:<endpoint>'"};
  }
  opts.k = f.k;
  opts.min_key_len = f.min_key_len;
  opts.stoplist = f.stoplist == "default" ? nullptr : f.stoplist.c_str();
  if (!f.split.empty()) {
    opts.has_split = 1;
    opts.split = split_of(f.split);
  }
  opts.seed = f.seed;
  opts.threads = f.threads;
  opts.exclude_topk = f.include_topk ? 0 : 1;
  const fs::path out = prepare_out_dir(f.out);

  auto corpus = load_corpus(f.corpus);
  PoolPtr pool;
  if (!f.pool.empty()) {
    gc_pool* p = nullptr;
    check(gc_pool_load(f.pool.c_str(), &p));
    pool.reset(p);
  }
  gc_scorer_options so;
  gc_scorer_options_default(&so);
  so.lambda = f.lambda;
  so.alpha = f.alpha;
  so.timeout_ms = f.timeout_ms;
  so.pool_size = f.threads == 0 ? 1 : f.threads;
  gc_scorer* sraw = nullptr;
  check(gc_scorer_create(spec.c_str(), &so, &sraw));
  ScorerPtr scorer(sraw);

  char* jsonl = nullptr;
  if (grounding) {
    check(gc_grounding_batch(corpus.get(), pool.get(), scorer.get(), &opts, &jsonl));
  } else {
    check(gc_coco_batch(corpus.get(), pool.get(), scorer.get(), &opts, &jsonl));
  }
  std::string lines = take(jsonl);
  write_file(out / (grounding ? "grounding_scores.jsonl" : "coco_scores.jsonl"), lines);
  // The last line is the summary.
  if (lines.size() > 1) {
    const auto start = lines.rfind('\n', lines.size() - 2);
    std::cout << lines.substr(start == std::string::npos ? 0 : start + 1);
  }
  return kExitOk;
}

int run_compare(const std::string& old_path, const std::string& new_path, const std::string& out_dir) {
  require_file(old_path, "--old");
  require_file(new_path, "--new");
  const fs::path out = prepare_out_dir(out_dir);
  gc_report* a = nullptr;
  check(gc_report_load(old_path.c_str(), &a));
  ReportPtr old_report(a);
  gc_report* b = nullptr;
  check(gc_report_load(new_path.c_str(), &b));
  ReportPtr new_report(b);
  char* json = nullptr;
  check(gc_compare_reports(old_report.get(), new_report.get(), &json));
  write_file(out / "comparison.json", take(json));
  return kExitOk;
}

void add_scan_flags(CLI::App* cmd, ScanFlags& f) {
  cmd->add_option("--corpus", f.corpus, "Corpus JSONL");
  cmd->add_option("--embeddings", f.embeddings, "Embedding JSONL {id, vector}");
  cmd->add_option("--k", f.k, "Neighbours per query")->capture_default_str();
  cmd->add_option("--tau-flag", f.tau_flag, "Similarity at which a pair is flagged")->capture_default_str();
  cmd->add_option("--bins", f.bins, "Histogram bins over [-1, 1]")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
}

void add_metric_flags(CLI::App* cmd, MetricFlags& f) {
  cmd->add_option("--corpus", f.corpus, "Corpus JSONL with answers");
  cmd->add_option("--pool", f.pool, "Document pool JSONL {doc_id, text}");
  cmd->add_option("--retriever", f.retriever, "bm25 or corpus")->capture_default_str();
  cmd->add_option("--scorer", f.scorer, "reference or external:<endpoint> (default: $GROUNDCHECK_SCORER)");
  cmd->add_option("--k", f.k, "Documents retrieved per question")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Base seed for random retrievals")->capture_default_str();
  cmd->add_option("--split", f.split, "Only score this split");
  cmd->add_option("--stoplist", f.stoplist, "default, none, or a word-per-line file")->capture_default_str();
  cmd->add_option("--min-key-len", f.min_key_len, "Shortest key token in code points")->capture_default_str();
  cmd->add_option("--lambda", f.lambda, "Reference scorer bigram weight")->capture_default_str();
  cmd->add_option("--alpha", f.alpha, "Reference scorer smoothing")->capture_default_str();
  cmd->add_option("--timeout-ms", f.timeout_ms, "External scorer timeout")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"groundcheck: dataset leakage scans and counterfactual factuality metrics"};
  app.require_subcommand(1);

  ScanFlags scan_flags;
  std::string source = "validation";
  std::string target = "train";
  auto* scan_cmd = app.add_subcommand("overlap-scan", "Top-K similarity scan of one split against another");
  add_scan_flags(scan_cmd, scan_flags);
  scan_cmd->add_option("--source", source, "Query split")->capture_default_str();
  scan_cmd->add_option("--target", target, "Searched split")->capture_default_str();

  ScanFlags dedup_flags;
  double tau_cluster = 0.9;
  std::string policy = "purge_eval";
  auto* dedup_cmd = app.add_subcommand("dedup", "Cluster flagged questions and purge cross-split leakage");
  add_scan_flags(dedup_cmd, dedup_flags);
  dedup_cmd->add_option("--tau-cluster", tau_cluster, "Average-linkage merge threshold")->capture_default_str();
  dedup_cmd->add_option("--policy", policy, "purge_eval or keep_one")->capture_default_str();

  MetricFlags coco_flags;
  auto* coco_cmd = app.add_subcommand("coco", "CoCo score of every answer against its retrieved documents");
  add_metric_flags(coco_cmd, coco_flags);

  MetricFlags grounding_flags;
  auto* grounding_cmd = app.add_subcommand("grounding", "Grounding score: CoCo(top-K) - CoCo(random)");
  add_metric_flags(grounding_cmd, grounding_flags);
  grounding_cmd->add_flag("--include-topk", grounding_flags.include_topk,
                          "Let random draws include the retrieved documents");

  std::string old_report;
  std::string new_report;
  std::string compare_out = ".";
  auto* compare_cmd = app.add_subcommand("compare", "Compare two overlap reports of the same split pair");
  compare_cmd->add_option("--old", old_report, "Report of the earlier dataset version");
  compare_cmd->add_option("--new", new_report, "Report of the later dataset version");
  compare_cmd->add_option("--out", compare_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*scan_cmd) return run_overlap_scan(scan_flags, source, target);
    if (*dedup_cmd) return run_dedup(dedup_flags, tau_cluster, policy);
    if (*coco_cmd) return run_metric(coco_flags, false);
    if (*grounding_cmd) return run_metric(grounding_flags, true);
    if (*compare_cmd) return run_compare(old_report, new_report, compare_out);
  } catch (const Failure& f) {
    std::cerr << "groundcheck: " << f.message << "\n";
    if (f.exit_code == kExitUsage) std::cerr << "run 'groundcheck --help' for usage\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "groundcheck: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

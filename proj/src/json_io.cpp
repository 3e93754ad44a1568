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

#include <charconv>

#include "groundcheck/error.hpp"
#include "groundcheck/json_io.hpp"

namespace groundcheck {
namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) raise(ErrorCode::kSchema, std::string("report is missing '") + key + "'");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) raise(ErrorCode::kSchema, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::size_t count(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned()) raise(ErrorCode::kSchema, std::string("'") + key + "' must be a count");
  return v.get<std::size_t>();
}

std::string text(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) raise(ErrorCode::kSchema, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) raise(ErrorCode::kInternal, "cannot format number");
  return std::string(buf, end);
}

Json to_json(const DistributionStats& s) {
  Json j = Json::object();
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["excess_kurtosis"] = optional_number(s.excess_kurtosis);
  Json bins = Json::array();
  for (const auto& b : s.histogram) bins.push_back({{"lower", b.lower}, {"upper", b.upper}, {"density", b.density}});
  j["histogram"] = std::move(bins);
  return j;
}

DistributionStats stats_from_json(const Json& j) {
  if (!j.is_object()) raise(ErrorCode::kSchema, "statistics must be an object");
  DistributionStats s;
  s.n = count(j, "n");
  s.mean = number(j, "mean");
  s.variance = number(j, "variance");
  const Json& k = field(j, "excess_kurtosis");
  if (!k.is_null()) {
    if (!k.is_number()) raise(ErrorCode::kSchema, "'excess_kurtosis' must be a number or null");
    s.excess_kurtosis = k.get<double>();
  }
  const Json& bins = field(j, "histogram");
  if (!bins.is_array()) raise(ErrorCode::kSchema, "'histogram' must be an array");
  for (const auto& b : bins) {
    if (!b.is_object()) raise(ErrorCode::kSchema, "histogram bins must be objects");
    s.histogram.push_back({number(b, "lower"), number(b, "upper"), number(b, "density")});
  }
  return s;
}

Json to_json(const OverlapReport& r) {
  Json j = Json::object();
  j["pair"] = {{"source", std::string(to_string(r.pair.source))}, {"target", std::string(to_string(r.pair.target))}};
  j["K"] = r.k;
  j["tau_flag"] = r.tau_flag;
  j["num_queries"] = r.num_queries;
  j["flagged_fraction"] = r.flagged_fraction;
  Json per_k = Json::object();
  for (const auto& [k, s] : r.per_k_stats) per_k[std::to_string(k)] = to_json(s);
  j["per_k_stats"] = std::move(per_k);
  Json flagged = Json::array();
  for (const auto& f : r.flagged) {
    flagged.push_back({{"query_id", f.query_id}, {"neighbor_id", f.neighbor_id}, {"similarity", f.similarity}});
  }
  j["flagged"] = std::move(flagged);
  return j;
}

OverlapReport report_from_json(const Json& j) {
  if (!j.is_object()) raise(ErrorCode::kSchema, "report must be a JSON object");
  OverlapReport r;
  const Json& pair = field(j, "pair");
  if (!pair.is_object()) raise(ErrorCode::kSchema, "'pair' must be an object");
  r.pair.source = parse_split(text(pair, "source"));
  r.pair.target = parse_split(text(pair, "target"));
  r.k = count(j, "K");
  r.tau_flag = number(j, "tau_flag");
  r.num_queries = count(j, "num_queries");
  r.flagged_fraction = number(j, "flagged_fraction");
  const Json& per_k = field(j, "per_k_stats");
  if (!per_k.is_object()) raise(ErrorCode::kSchema, "'per_k_stats' must be an object");
  for (auto it = per_k.begin(); it != per_k.end(); ++it) {
    std::size_t k = 0;
    const std::string& key = it.key();
    auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), k);
    if (ec != std::errc() || end != key.data() + key.size() || k == 0) {
      raise(ErrorCode::kSchema, "per_k_stats key '" + key + "' is not a positive integer");
    }
    r.per_k_stats.emplace(k, stats_from_json(it.value()));
  }
  const Json& flagged = field(j, "flagged");
  if (!flagged.is_array()) raise(ErrorCode::kSchema, "'flagged' must be an array");
  for (const auto& f : flagged) {
    if (!f.is_object()) raise(ErrorCode::kSchema, "flagged entries must be objects");
    r.flagged.push_back({text(f, "query_id"), text(f, "neighbor_id"), number(f, "similarity")});
  }
  return r;
}

Json to_json(const VersionComparison& cmp) {
  Json per_k = Json::object();
  for (const auto& [k, c] : cmp.per_k) {
    Json e = Json::object();
    e["old_stats"] = to_json(c.old_stats);
    e["new_stats"] = to_json(c.new_stats);
    e["overlap_coefficient"] = c.overlap_coefficient;
    e["mean_reduction"] = optional_number(c.mean_reduction);
    e["kurtosis_delta"] = optional_number(c.kurtosis_delta);
    per_k[std::to_string(k)] = std::move(e);
  }
  Json j = Json::object();
  j["per_k"] = std::move(per_k);
  return j;
}

Json to_json(const ClusterSet& c) {
  Json j = Json::object();
  j["linkage"] = "average";
  j["tau_cluster"] = c.tau_cluster;
  j["clusters"] = c.clusters;
  return j;
}

Json to_json(const Removal& r) {
  Json j = Json::object();
  j["removed_id"] = r.removed_id;
  j["split"] = std::string(to_string(r.split));
  j["cluster_id"] = r.cluster_id;
  j["reason"] = r.reason;
  j["kept_id"] = r.kept_id;
  return j;
}

Json to_json(const Retrieval& r) {
  Json ranked = Json::array();
  for (const auto& d : r.ranked) ranked.push_back({{"doc_id", d.doc_id}, {"score", d.score}});
  Json j = Json::object();
  j["query_id"] = r.query_id;
  j["ranked"] = std::move(ranked);
  return j;
}

Json to_json(const KeyTokenSet& key) {
  Json j = Json::object();
  j["indices"] = key.indices;
  j["tokens"] = key.tokens;
  return j;
}

Json to_json(const ScoredAnswer& s) {
  Json j = Json::object();
  j["key"] = to_json(s.key);
  j["p_unmasked"] = s.p_unmasked.probs;
  j["p_masked"] = s.p_masked.probs;
  j["coco"] = s.coco;
  return j;
}

Json to_json(const GroundingResult& g) {
  Json j = Json::object();
  j["c_topk"] = g.c_topk;
  j["c_random"] = g.c_random;
  j["g"] = g.g;
  j["retrieval_used"] = to_json(g.retrieval_used);
  j["random_used"] = to_json(g.random_used);
  j["seed"] = g.seed;
  return j;
}

std::string density_csv(const OverlapReport& report, std::size_t k) {
  auto it = report.per_k_stats.find(k);
  if (it == report.per_k_stats.end()) raise(ErrorCode::kReportMismatch, "no statistics for k=" + std::to_string(k));
  std::string out = "bin_lower,bin_upper,density\n";
  for (const auto& b : it->second.histogram) {
    out += format_double(b.lower) + "," + format_double(b.upper) + "," + format_double(b.density) + "\n";
  }
  return out;
}

}  // namespace groundcheck

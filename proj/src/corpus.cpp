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

#include <fstream>
#include <istream>
#include <ostream>

#include "groundcheck/corpus.hpp"
#include "groundcheck/error.hpp"
#include "json.hpp"

namespace groundcheck {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  raise(ErrorCode::kSchema, "unknown split value '" + std::string(name) + "'");
}

Corpus::Corpus(std::vector<CorpusRecord> records) : records_(std::move(records)) {
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const CorpusRecord& r = records_[i];
    if (r.id.empty()) raise(ErrorCode::kSchema, "record id is empty");
    if (is_blank(r.question)) raise(ErrorCode::kSchema, "record '" + r.id + "' has a blank question");
    if (!index_.emplace(r.id, i).second) raise(ErrorCode::kDuplicateId, r.id);
    by_split_[static_cast<std::size_t>(r.split)].push_back(r.id);
  }
}

const CorpusRecord* Corpus::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

namespace {

CorpusRecord parse_record(const std::string& line, std::size_t line_no) {
  const std::string where = "line " + std::to_string(line_no);
  ojson obj;
  try {
    obj = ojson::parse(line);
  } catch (const ojson::parse_error& e) {
    raise(ErrorCode::kParse, where + ": " + e.what());
  }
  if (!obj.is_object()) raise(ErrorCode::kParse, where + ": expected a JSON object");

  auto require_string = [&](const char* key) -> std::string {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
      raise(ErrorCode::kSchema, where + ": field '" + key + "' must be a string");
    }
    return it->get<std::string>();
  };

  CorpusRecord r;
  r.id = require_string("id");
  if (r.id.empty()) raise(ErrorCode::kSchema, where + ": empty id");
  try {
    r.split = parse_split(require_string("split"));
  } catch (const Error& e) {
    raise(ErrorCode::kSchema, where + ": " + e.what());
  }
  r.question = require_string("question");
  if (is_blank(r.question)) raise(ErrorCode::kSchema, where + ": blank question");

  if (auto it = obj.find("answer"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) raise(ErrorCode::kSchema, where + ": 'answer' must be a string");
    r.answer = it->get<std::string>();
  }
  if (auto it = obj.find("documents"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) raise(ErrorCode::kSchema, where + ": 'documents' must be an array");
    std::vector<std::string> docs;
    for (const auto& d : *it) {
      if (!d.is_string()) raise(ErrorCode::kSchema, where + ": documents must be strings");
      docs.push_back(d.get<std::string>());
    }
    r.documents = std::move(docs);
  }

  ojson extra = ojson::object();
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& k = it.key();
    if (k == "id" || k == "split" || k == "question" || k == "answer" || k == "documents") continue;
    extra[k] = it.value();
  }
  r.extra_json = extra.dump();
  return r;
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
  std::vector<CorpusRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    records.push_back(parse_record(line, line_no));
  }
  return Corpus(std::move(records));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  if (format != CorpusFormat::kJsonl) raise(ErrorCode::kConfig, "unsupported corpus format");
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIo, "cannot open corpus file " + path.string());
  return parse_corpus(in);
}

std::string serialize_record(const CorpusRecord& r) {
  ojson obj = ojson::object();
  obj["id"] = r.id;
  obj["split"] = std::string(to_string(r.split));
  obj["question"] = r.question;
  if (r.answer) obj["answer"] = *r.answer;
  if (r.documents) obj["documents"] = *r.documents;
  ojson extra = ojson::parse(r.extra_json.empty() ? "{}" : r.extra_json);
  for (auto it = extra.begin(); it != extra.end(); ++it) obj[it.key()] = it.value();
  return obj.dump();
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& r : corpus.records()) out << serialize_record(r) << '\n';
}

}  // namespace groundcheck

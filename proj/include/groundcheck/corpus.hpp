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

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace groundcheck {

enum class Split { kTrain = 0, kValidation = 1, kTest = 2 };

inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kValidation,
                                                    Split::kTest};

std::string_view to_string(Split split) noexcept;
/// Accepts exactly "train", "validation" and "test"; anything else is a SchemaError.
Split parse_split(std::string_view name);

struct CorpusRecord {
  std::string id;
  Split split = Split::kTrain;
  std::string question;
  std::optional<std::string> answer;
  std::optional<std::vector<std::string>> documents;
  // Unknown fields of the source line, serialized as a JSON object ("{}" if none).
  std::string extra_json = "{}";

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

/// An immutable, validated collection of records with a per-split id index.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<CorpusRecord> records);

  const std::vector<CorpusRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  std::span<const std::string> ids(Split split) const noexcept {
    return by_split_[static_cast<std::size_t>(split)];
  }
  const CorpusRecord* find(std::string_view id) const;

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.records_ == b.records_; }

 private:
  std::vector<CorpusRecord> records_;
  std::array<std::vector<std::string>, 3> by_split_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class CorpusFormat { kJsonl };

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format = CorpusFormat::kJsonl);
Corpus parse_corpus(std::istream& in);

std::string serialize_record(const CorpusRecord& record);
void write_corpus(const Corpus& corpus, std::ostream& out);

// ---------------------------------------------------------------------------
// Tokenization

/// Reserved token that replaces masked source tokens. The tokenizer keeps it
/// atomic even though its brackets are punctuation.
inline constexpr std::string_view kMaskToken = "⟨mask⟩";
inline constexpr std::string_view kUnkToken = "⟨unk⟩";

using TokenSeq = std::vector<std::string>;

struct TokenSpan {
  std::size_t begin = 0;  // byte offsets into TokenizedText::normalized
  std::size_t end = 0;
  std::string token;
};

struct TokenizedText {
  std::string normalized;  // NFC form of the input, case preserved
  std::vector<TokenSpan> spans;
};

/// NFC-normalizes, splits on whitespace and punctuation, drops punctuation,
/// lowercases each token. Deterministic; never throws on bad UTF-8 (invalid
/// bytes become U+FFFD).
TokenSeq tokenize(std::string_view text);
TokenizedText tokenize_with_spans(std::string_view text);

std::string join_tokens(std::span<const std::string> tokens);

/// True when the text holds no non-whitespace code point.
bool is_blank(std::string_view text);

}  // namespace groundcheck

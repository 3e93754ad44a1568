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

#include <cctype>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "groundcheck/corpus.hpp"
#include "groundcheck/error.hpp"

namespace groundcheck {
namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    raise(ErrorCode::kInternal, "ICU NFC normalizer unavailable");
  }
  return *n;
}

std::string to_nfc(std::string_view text) {
  icu::UnicodeString in = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(in, status);
  if (U_FAILURE(status)) raise(ErrorCode::kInternal, "NFC normalization failed");
  std::string utf8;
  out.toUTF8String(utf8);
  return utf8;
}

bool is_separator(UChar32 c) {
  if (u_isUWhiteSpace(c)) return true;
  if (c < 0x80) return std::ispunct(static_cast<unsigned char>(c)) != 0;
  return u_ispunct(c) != 0;
}

std::string fold_token(std::string_view raw) {
  icu::UnicodeString lowered;
  int32_t i = 0;
  const auto* bytes = reinterpret_cast<const uint8_t*>(raw.data());
  const auto len = static_cast<int32_t>(raw.size());
  while (i < len) {
    UChar32 c;
    U8_NEXT(bytes, i, len, c);
    if (c < 0) c = 0xFFFD;
    lowered.append(u_tolower(c));
  }
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString composed = nfc().normalize(lowered, status);
  if (U_FAILURE(status)) raise(ErrorCode::kInternal, "NFC normalization failed");
  std::string out;
  composed.toUTF8String(out);
  return out;
}

}  // namespace

TokenizedText tokenize_with_spans(std::string_view text) {
  TokenizedText result;
  result.normalized = to_nfc(text);
  const std::string& s = result.normalized;
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto len = static_cast<int32_t>(s.size());

  int32_t token_begin = -1;
  auto flush = [&](int32_t end) {
    if (token_begin >= 0 && end > token_begin) {
      auto raw = std::string_view(s).substr(token_begin, end - token_begin);
      result.spans.push_back({static_cast<std::size_t>(token_begin),
                              static_cast<std::size_t>(end), fold_token(raw)});
    }
    token_begin = -1;
  };

  int32_t i = 0;
  while (i < len) {
    if (std::string_view(s).substr(i).starts_with(kMaskToken)) {
      flush(i);
      const auto end = i + static_cast<int32_t>(kMaskToken.size());
      result.spans.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(end),
                              std::string(kMaskToken)});
      i = end;
      continue;
    }
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(bytes, i, len, c);
    if (c < 0) c = 0xFFFD;
    if (is_separator(c)) {
      flush(at);
    } else if (token_begin < 0) {
      token_begin = at;
    }
  }
  flush(len);
  return result;
}

TokenSeq tokenize(std::string_view text) {
  TokenizedText t = tokenize_with_spans(text);
  TokenSeq out;
  out.reserve(t.spans.size());
  for (auto& span : t.spans) out.push_back(std::move(span.token));
  return out;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

bool is_blank(std::string_view text) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto len = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(bytes, i, len, c);
    if (c < 0 || !u_isUWhiteSpace(c)) return false;
  }
  return true;
}

}  // namespace groundcheck

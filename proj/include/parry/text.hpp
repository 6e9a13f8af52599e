// Copyright 2026 The Parry Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Whitespace tokenization and the small string helpers every module shares.
// All text handling in this library is whitespace-token based on purpose:
// no language-specific tokenizer is involved anywhere.

#ifndef PARRY_TEXT_HPP_
#define PARRY_TEXT_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace parry {

inline bool is_space_byte(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Splits on runs of ASCII whitespace. Never produces empty tokens.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space_byte(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !is_space_byte(text[i])) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

inline std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

inline bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '\'' ||
         c == '-';
}

// Canonical lookup form of a token: leading/trailing punctuation stripped,
// case folded. "Books!!" -> "books", "]" -> "".
inline std::string token_key(std::string_view token) {
  size_t start = 0;
  size_t end = token.size();
  while (start < end && !is_word_char(token[start])) ++start;
  while (end > start && !is_word_char(token[end - 1])) --end;
  return to_lower(token.substr(start, end - start));
}

inline std::string trim(std::string_view s) {
  size_t start = 0;
  size_t end = s.size();
  while (start < end && is_space_byte(s[start])) ++start;
  while (end > start && is_space_byte(s[end - 1])) --end;
  return std::string(s.substr(start, end - start));
}

// Case-folds and collapses whitespace runs to single spaces. This is the
// equality key for prompt suffixes.
inline std::string normalize_text(std::string_view s) {
  return to_lower(join_tokens(tokenize(s)));
}

// True if `word` occurs as a whole whitespace token of `text`, compared on
// token_key (case-insensitive, punctuation-stripped).
inline bool contains_word(std::string_view text, std::string_view word) {
  const std::string want = to_lower(word);
  for (const auto& tok : tokenize(text)) {
    if (token_key(tok) == want) return true;
  }
  return false;
}

// FNV-1a. Stable across platforms; used for cache keys and config hashes.
inline uint64_t fnv1a64(std::string_view data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view data) {
  static const char* digits = "0123456789abcdef";
  uint64_t h = fnv1a64(data);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

// Minimal structural UTF-8 check; datasets are required to be valid UTF-8.
inline bool is_valid_utf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    size_t len = 0;
    if (c < 0x80) {
      len = 1;
    } else if ((c >> 5) == 0x6) {
      len = 2;
    } else if ((c >> 4) == 0xe) {
      len = 3;
    } else if ((c >> 3) == 0x1e) {
      len = 4;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
    }
    i += len;
  }
  return true;
}

}  // namespace parry

#endif  // PARRY_TEXT_HPP_

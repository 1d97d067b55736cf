// Copyright 2026 The DSR Workbench Authors.
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

#include "dsr/core/tokenizer.hpp"

#include <algorithm>

#include "dsr/core/utf8.hpp"

namespace dsr {

bool is_space(char32_t cp) noexcept {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x85: case 0xa0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202f: case 0x205f: case 0x3000: case 0xfeff:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200b;
  }
}

bool is_punct(char32_t cp) noexcept {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2f) || (cp >= 0x3a && cp <= 0x40) ||
           (cp >= 0x5b && cp <= 0x60) || (cp >= 0x7b && cp <= 0x7e);
  }
  // Latin-1 punctuation/symbols, General Punctuation, CJK punctuation.
  return (cp >= 0xa1 && cp <= 0xbf && cp != 0xaa && cp != 0xb5 && cp != 0xba) ||
         cp == 0xd7 || cp == 0xf7 || (cp >= 0x2010 && cp <= 0x2027) ||
         (cp >= 0x2030 && cp <= 0x205e) || (cp >= 0x3001 && cp <= 0x303f);
}

namespace {

bool is_word(char32_t cp) noexcept { return !is_space(cp) && !is_punct(cp) && cp >= 0x20; }

bool is_ascii_letter(char32_t cp) noexcept {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

bool is_joiner(char32_t cp) noexcept { return cp == U'\'' || cp == U'-' || cp == 0x2019; }

// Length of a letter-dot acronym starting at i (at least two letter-dot
// pairs, not followed by a word character), or 0.
std::size_t acronym_length(const std::u32string& s, std::size_t i) {
  std::size_t j = i;
  std::size_t pairs = 0;
  while (j + 1 < s.size() && is_ascii_letter(s[j]) && s[j + 1] == U'.') {
    j += 2;
    ++pairs;
  }
  if (pairs < 2) return 0;
  if (j < s.size() && is_word(s[j])) return 0;
  return j - i;
}

}  // namespace

std::vector<Token> tokenize(std::string_view content) {
  const std::u32string s = utf8::decode(content);
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t c = s[i];
    if (is_space(c) || c < 0x20) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    if (is_word(c)) {
      len = acronym_length(s, i);
      if (len == 0) {
        std::size_t j = i + 1;
        while (j < s.size()) {
          if (is_word(s[j])) {
            ++j;
          } else if (is_joiner(s[j]) && j + 1 < s.size() && is_word(s[j + 1])) {
            j += 2;
          } else {
            break;
          }
        }
        len = j - i;
      }
    } else {
      len = 1;
    }
    out.push_back(Token{utf8::encode(std::u32string_view(s).substr(i, len)), i, i + len});
    i += len;
  }
  return out;
}

TokenRange covering_tokens(const std::vector<Token>& tokens, std::size_t start, std::size_t end) {
  // Tokens are sorted and disjoint, so the intersecting ones are contiguous.
  auto first = std::partition_point(tokens.begin(), tokens.end(),
                                    [&](const Token& t) { return t.end <= start; });
  auto last = std::partition_point(first, tokens.end(),
                                   [&](const Token& t) { return t.start < end; });
  return {static_cast<std::size_t>(first - tokens.begin()),
          static_cast<std::size_t>(last - tokens.begin())};
}

}  // namespace dsr

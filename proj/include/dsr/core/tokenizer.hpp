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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dsr {

// A token with scalar-value offsets [start, end) into its text.
struct Token {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

// Whitespace + punctuation tokenizer shared by the test embedder and the
// token-level span metrics.
//
//   - whitespace separates tokens and never belongs to one;
//   - letter-dot acronyms ("E.U.", "U.S.A.") stay whole;
//   - a word is a maximal run of word characters, with an apostrophe or
//     hyphen kept when it sits between two word characters ("don't");
//   - any other punctuation or symbol character is a token by itself.
std::vector<Token> tokenize(std::string_view content);

bool is_space(char32_t cp) noexcept;
bool is_punct(char32_t cp) noexcept;

// Index range [first, last) of tokens intersecting [start, end); empty when
// no token intersects.
struct TokenRange {
  std::size_t first = 0;
  std::size_t last = 0;
  bool empty() const noexcept { return first >= last; }
};
TokenRange covering_tokens(const std::vector<Token>& tokens, std::size_t start, std::size_t end);

}  // namespace dsr

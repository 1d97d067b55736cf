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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dsr/core/tokenizer.hpp"
#include "dsr/core/types.hpp"
#include "dsr/scorer/matrix.hpp"

namespace dsr::scorer {

// A text encoded once: word-level tokens plus one embedding row per token.
struct EmbeddedText {
  std::string text_id;
  std::vector<Token> tokens;
  MatrixF rows;  // tokens.size() x h

  std::size_t width() const noexcept { return rows.cols(); }
  friend bool operator==(const EmbeddedText&, const EmbeddedText&) = default;
};

// Deterministic stand-in for a transformer encoder. Each token's raw row is
// h values drawn from splitmix64 seeded with the FNV-1a hash of the token's
// UTF-8 bytes, mapped to [-1, 1). Rows are then contextualized: every row
// becomes the mean of itself and its immediate neighbours. Results are
// identical on every platform.
//
// Throws ValidationError on empty text or when the token count exceeds
// text_max.
EmbeddedText embed_test(const Text& text, std::size_t h, std::size_t text_max);

// The uncontextualized row for one token surface.
std::vector<double> raw_token_row(std::string_view surface, std::size_t h);

// Checks that tokens are nonempty, ordered, non-overlapping and that row
// count and width agree. Throws ValidationError.
void validate_embedded(const EmbeddedText& e, std::size_t h);

// Checks the tokens against their text: every token surface equals its
// content slice, and the gaps between tokens (and around them) hold only
// whitespace. Throws ValidationError naming the first gap or mismatch.
void check_tiling(const EmbeddedText& e, const Text& text);

// embeddings.jsonl: {"text_id","h","tokens":[{"s","start","end"}],"rows":[[...]...]}
std::vector<EmbeddedText> load_embeddings(const std::filesystem::path& path, std::size_t h);
std::vector<EmbeddedText> parse_embeddings(std::istream& in, const std::string& label,
                                           std::size_t h);
void write_embeddings(const std::vector<EmbeddedText>& texts, std::ostream& out);
void write_embeddings(const std::vector<EmbeddedText>& texts, const std::filesystem::path& path);

// Mean of the rows of every token whose [start, end) intersects the span.
// Throws ValidationError when no token intersects.
std::vector<double> pool_span(const EmbeddedText& embedded, const Span& span);
std::vector<double> pool_range(const EmbeddedText& embedded, std::size_t start, std::size_t end);

}  // namespace dsr::scorer

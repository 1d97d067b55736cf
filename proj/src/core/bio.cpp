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

#include "dsr/core/bio.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "dsr/core/utf8.hpp"
#include "dsr/util/error.hpp"

namespace dsr {

std::string_view to_string(BioTag tag) noexcept {
  switch (tag) {
    case BioTag::O: return "O";
    case BioTag::BChar: return "B-CHAR";
    case BioTag::IChar: return "I-CHAR";
    case BioTag::BTop: return "B-TOP";
    case BioTag::ITop: return "I-TOP";
  }
  return "O";
}

BioTag parse_bio_tag(std::string_view s) {
  if (s == "O") return BioTag::O;
  if (s == "B-CHAR") return BioTag::BChar;
  if (s == "I-CHAR") return BioTag::IChar;
  if (s == "B-TOP") return BioTag::BTop;
  if (s == "I-TOP") return BioTag::ITop;
  throw ValidationError("unknown BIO tag '" + std::string(s) + "'");
}

namespace {

std::string describe(const Span& s) {
  return std::string(to_string(s.kind)) + "[" + std::to_string(s.start) + "," +
         std::to_string(s.end) + ") '" + s.surface + "'";
}

void check_tiling(std::span<const Token> tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].start >= tokens[i].end) {
      throw ValidationError("empty token at index " + std::to_string(i));
    }
    if (i > 0 && tokens[i].start < tokens[i - 1].end) {
      throw ValidationError("tokens out of order at index " + std::to_string(i));
    }
  }
}

}  // namespace

std::vector<BioTag> spans_to_bio(std::span<const Token> tokens, std::span<const Span> spans) {
  check_tiling(tokens);

  struct Placed {
    std::size_t first;
    std::size_t last;  // inclusive
  };
  std::vector<Placed> ranges;
  ranges.reserve(spans.size());
  for (const auto& s : spans) {
    auto first = std::find_if(tokens.begin(), tokens.end(),
                              [&](const Token& t) { return t.start == s.start; });
    auto last = std::find_if(tokens.begin(), tokens.end(),
                             [&](const Token& t) { return t.end == s.end; });
    if (first == tokens.end() || last == tokens.end() || last < first) {
      throw AlignmentError("span " + describe(s) + " is not aligned to token boundaries");
    }
    ranges.push_back({static_cast<std::size_t>(first - tokens.begin()),
                      static_cast<std::size_t>(last - tokens.begin())});
  }

  std::vector<std::size_t> order(spans.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Span& x = spans[a];
    const Span& y = spans[b];
    if (x.kind != y.kind) return x.kind == SpanKind::Character;
    if (x.length() != y.length()) return x.length() > y.length();
    return x.start < y.start;
  });

  std::vector<BioTag> tags(tokens.size(), BioTag::O);
  for (std::size_t idx : order) {
    const auto [first, last] = ranges[idx];
    bool free = true;
    for (std::size_t t = first; t <= last && free; ++t) free = tags[t] == BioTag::O;
    if (!free) continue;
    const bool character = spans[idx].kind == SpanKind::Character;
    tags[first] = character ? BioTag::BChar : BioTag::BTop;
    for (std::size_t t = first + 1; t <= last; ++t) {
      tags[t] = character ? BioTag::IChar : BioTag::ITop;
    }
  }
  return tags;
}

std::vector<Span> bio_to_spans(std::string_view text_id, std::string_view content,
                               std::span<const Token> tokens, std::span<const BioTag> tags) {
  if (tokens.size() != tags.size()) {
    throw ValidationError("token/tag length mismatch: " + std::to_string(tokens.size()) + " vs " +
                          std::to_string(tags.size()));
  }
  check_tiling(tokens);

  std::vector<Span> out;
  struct Open {
    SpanKind kind;
    std::size_t start;
    std::size_t end;
  };
  std::optional<Open> open;
  auto close = [&] {
    if (!open) return;
    out.push_back(Span{std::string(text_id), open->start, open->end, open->kind,
                       utf8::slice(content, open->start, open->end)});
    open.reset();
  };

  for (std::size_t i = 0; i < tags.size(); ++i) {
    const BioTag tag = tags[i];
    if (tag == BioTag::O) {
      close();
      continue;
    }
    const SpanKind kind =
        (tag == BioTag::BChar || tag == BioTag::IChar) ? SpanKind::Character : SpanKind::Topic;
    const bool inside = tag == BioTag::IChar || tag == BioTag::ITop;
    if (inside && open && open->kind == kind) {
      open->end = tokens[i].end;
    } else {
      close();
      open = Open{kind, tokens[i].start, tokens[i].end};
    }
  }
  close();
  return out;
}

}  // namespace dsr

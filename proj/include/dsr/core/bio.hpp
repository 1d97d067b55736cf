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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsr/core/tokenizer.hpp"
#include "dsr/core/types.hpp"

namespace dsr {

// BIO interchange tags for external span taggers.
enum class BioTag : std::uint8_t { O, BChar, IChar, BTop, ITop };

std::string_view to_string(BioTag tag) noexcept;
BioTag parse_bio_tag(std::string_view s);

// Encodes spans as one tag per token. Overlapping spans are flattened: spans
// are placed in precedence order (Character before Topic, then longer before
// shorter, then earlier start) and a span is dropped whole if any of its
// tokens is already taken.
//
// Throws AlignmentError if a span does not start and end on token boundaries.
std::vector<BioTag> spans_to_bio(std::span<const Token> tokens, std::span<const Span> spans);

// Decodes tags back to spans over `content`. A stray I-X (after O or after a
// different label) opens a new span of kind X. Throws ValidationError when
// the token and tag counts differ.
std::vector<Span> bio_to_spans(std::string_view text_id, std::string_view content,
                               std::span<const Token> tokens, std::span<const BioTag> tags);

}  // namespace dsr

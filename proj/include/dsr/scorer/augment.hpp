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

#include <string>
#include <vector>

#include "dsr/core/types.hpp"

namespace dsr::scorer {

// Template substitution for debiasing: every Character span is rewritten once
// per entry of `char_lexicon`, every Topic span once per entry of
// `topic_lexicon`. The rest of the content is kept byte-for-byte and every
// score is copied unchanged.
//
// Other spans of the text follow the edit: spans ending at or before it are
// kept, spans starting at or after it shift by the length delta, and spans
// enclosing it grow or shrink with it. Spans nested inside the replaced one
// or straddling one of its ends no longer have a defined surface and are
// dropped from that variant.
//
// Variant ids are "<id>/debias/<span index>/<entry index>", with source
// "debias:<id>". Throws ValidationError if either lexicon is empty, an entry
// is empty, or a span does not belong to the text.
Corpus augment_debias(const Text& text, const std::vector<ScoredSpan>& spans,
                      const std::vector<std::string>& char_lexicon,
                      const std::vector<std::string>& topic_lexicon);

// Runs augment_debias over every text; the result holds each source text
// followed by its variants.
Corpus augment_corpus(const Corpus& corpus, const std::vector<std::string>& char_lexicon,
                      const std::vector<std::string>& topic_lexicon);

// One lexicon entry per nonblank line, surrounding whitespace trimmed.
std::vector<std::string> load_lexicon_lines(const std::string& text);

}  // namespace dsr::scorer

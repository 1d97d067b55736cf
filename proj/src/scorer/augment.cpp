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

#include "dsr/scorer/augment.hpp"

#include <optional>

#include "dsr/core/utf8.hpp"
#include "dsr/util/error.hpp"

namespace dsr::scorer {
namespace {

void check_lexicon(const std::vector<std::string>& lexicon, const char* name) {
  if (lexicon.empty()) throw ValidationError(std::string(name) + " lexicon is empty");
  for (const auto& entry : lexicon) {
    if (entry.empty()) {
      throw ValidationError(std::string(name) + " lexicon has an empty entry");
    }
    utf8::decode(entry);
  }
}

// New offsets of `other` after [start, end) became `replacement_len` long,
// or nullopt when the span cannot survive the edit.
std::optional<std::pair<std::size_t, std::size_t>> follow_edit(const Span& other, std::size_t start,
                                                               std::size_t end,
                                                               std::size_t replacement_len) {
  const auto shift = [&](std::size_t offset) { return offset - (end - start) + replacement_len; };
  if (other.end <= start) return std::pair{other.start, other.end};
  if (other.start >= end) return std::pair{shift(other.start), shift(other.end)};
  if (other.start <= start && other.end >= end) return std::pair{other.start, shift(other.end)};
  return std::nullopt;
}

}  // namespace

Corpus augment_debias(const Text& text, const std::vector<ScoredSpan>& spans,
                      const std::vector<std::string>& char_lexicon,
                      const std::vector<std::string>& topic_lexicon) {
  check_lexicon(char_lexicon, "character");
  check_lexicon(topic_lexicon, "topic");
  for (const auto& s : spans) {
    if (s.span.text_id != text.id) {
      throw ValidationError("span of text '" + s.span.text_id + "' passed with text '" + text.id +
                            "'");
    }
    validate_span(text, s.span);
  }

  const std::u32string content = utf8::decode(text.content);
  Corpus out;
  for (std::size_t si = 0; si < spans.size(); ++si) {
    const Span& target = spans[si].span;
    const auto& lexicon = target.kind == SpanKind::Character ? char_lexicon : topic_lexicon;
    for (std::size_t li = 0; li < lexicon.size(); ++li) {
      const std::u32string replacement = utf8::decode(lexicon[li]);
      std::u32string edited = content.substr(0, target.start);
      edited += replacement;
      edited += content.substr(target.end);

      Text variant;
      variant.id = text.id + "/debias/" + std::to_string(si) + "/" + std::to_string(li);
      variant.content = utf8::encode(edited);
      variant.source = "debias:" + text.id;
      variant.doc_labels = text.doc_labels;

      for (const auto& other : spans) {
        const auto moved = follow_edit(other.span, target.start, target.end, replacement.size());
        if (!moved) continue;
        ScoredSpan s = other;
        s.span = make_span(variant, moved->first, moved->second, other.span.kind);
        out.spans.push_back(std::move(s));
      }
      out.texts.push_back(std::move(variant));
    }
  }
  return out;
}

Corpus augment_corpus(const Corpus& corpus, const std::vector<std::string>& char_lexicon,
                      const std::vector<std::string>& topic_lexicon) {
  Corpus out;
  out.name = corpus.name + "-debias";
  for (const auto& text : corpus.texts) {
    std::vector<ScoredSpan> spans;
    for (const ScoredSpan* s : corpus.spans_of(text.id)) spans.push_back(*s);
    Corpus variants = augment_debias(text, spans, char_lexicon, topic_lexicon);
    out.texts.push_back(text);
    out.spans.insert(out.spans.end(), spans.begin(), spans.end());
    for (auto& t : variants.texts) out.texts.push_back(std::move(t));
    for (auto& s : variants.spans) out.spans.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> load_lexicon_lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos) {
      const auto last = line.find_last_not_of(" \t\r");
      out.push_back(line.substr(first, last - first + 1));
    }
    pos = nl + 1;
  }
  return out;
}

}  // namespace dsr::scorer

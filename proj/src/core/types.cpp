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

#include "dsr/core/types.hpp"

#include <cmath>
#include <unordered_set>

#include "dsr/core/utf8.hpp"
#include "dsr/util/error.hpp"

namespace dsr {

std::string_view to_string(SpanKind kind) noexcept {
  return kind == SpanKind::Character ? "Character" : "Topic";
}

std::string_view to_string(Dimension dim) noexcept {
  switch (dim) {
    case Dimension::OA: return "OA";
    case Dimension::VA: return "VA";
    case Dimension::HH: return "HH";
  }
  return "?";
}

std::string_view long_name(Dimension dim) noexcept {
  switch (dim) {
    case Dimension::OA: return "Oppose-Advocate";
    case Dimension::VA: return "Victimized-Aided";
    case Dimension::HH: return "Harmful-Helpful";
  }
  return "?";
}

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::HumanAggregate ? "HumanAggregate" : "Model";
}

SpanKind parse_span_kind(std::string_view s) {
  if (s == "Character" || s == "CHAR" || s == "char") return SpanKind::Character;
  if (s == "Topic" || s == "TOP" || s == "topic") return SpanKind::Topic;
  throw ValidationError("unknown span kind '" + std::string(s) + "'");
}

Dimension parse_dimension(std::string_view s) {
  if (s == "OA" || s == "oa") return Dimension::OA;
  if (s == "VA" || s == "va") return Dimension::VA;
  if (s == "HH" || s == "hh") return Dimension::HH;
  throw ValidationError("unknown dimension '" + std::string(s) + "'");
}

Provenance parse_provenance(std::string_view s) {
  if (s == "HumanAggregate") return Provenance::HumanAggregate;
  if (s == "Model") return Provenance::Model;
  throw ValidationError("unknown provenance '" + std::string(s) + "'");
}

RegardVector RegardVector::make(SpanKind kind, double oa, double va, double hh) {
  RegardVector v;
  v.kind_ = kind;
  v.mask_ = mask_for(kind);
  const std::array<double, 3> raw{oa, va, hh};
  for (std::size_t d = 0; d < 3; ++d) {
    if (!v.mask_[d]) continue;
    if (!std::isfinite(raw[d]) || raw[d] < -1.0 || raw[d] > 1.0) {
      throw ValidationError("regard score " + std::to_string(raw[d]) + " outside [-1, 1]");
    }
    v.scores_[d] = raw[d];
  }
  return v;
}

RegardVector RegardVector::checked(SpanKind kind, const std::array<double, 3>& scores,
                                   const std::array<bool, 3>& mask) {
  if (mask != mask_for(kind)) {
    throw ValidationError(std::string("mask does not match span kind ") +
                          std::string(to_string(kind)));
  }
  for (std::size_t d = 0; d < 3; ++d) {
    if (!mask[d] && scores[d] != 0.0) {
      throw ValidationError("masked-out dimension " +
                            std::string(to_string(static_cast<Dimension>(d))) +
                            " carries nonzero score");
    }
  }
  return make(kind, scores[0], scores[1], scores[2]);
}

const Text* Corpus::find_text(std::string_view id) const {
  for (const auto& t : texts) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::vector<const ScoredSpan*> Corpus::spans_of(std::string_view text_id) const {
  std::vector<const ScoredSpan*> out;
  for (const auto& s : spans) {
    if (s.span.text_id == text_id) out.push_back(&s);
  }
  return out;
}

void validate_span(const Text& text, const Span& span) {
  if (span.text_id != text.id) {
    throw ValidationError("span references text '" + span.text_id + "' but was checked against '" +
                          text.id + "'");
  }
  const std::size_t len = utf8::length(text.content);
  if (!(span.start < span.end && span.end <= len)) {
    throw ValidationError("span [" + std::to_string(span.start) + "," + std::to_string(span.end) +
                          ") invalid for text '" + text.id + "' of length " + std::to_string(len));
  }
  if (utf8::slice(text.content, span.start, span.end) != span.surface) {
    throw ValidationError("span surface '" + span.surface + "' does not match text '" + text.id +
                          "' at [" + std::to_string(span.start) + "," + std::to_string(span.end) +
                          ")");
  }
}

Span make_span(const Text& text, std::size_t start, std::size_t end, SpanKind kind) {
  const std::size_t len = utf8::length(text.content);
  if (!(start < end && end <= len)) {
    throw ValidationError("span [" + std::to_string(start) + "," + std::to_string(end) +
                          ") invalid for text '" + text.id + "' of length " + std::to_string(len));
  }
  return Span{text.id, start, end, kind, utf8::slice(text.content, start, end)};
}

void Corpus::validate(std::size_t max_content_length) const {
  std::unordered_map<std::string_view, const Text*> by_id;
  for (const auto& t : texts) {
    if (t.id.empty()) throw ValidationError("text with empty id in corpus '" + name + "'");
    if (!by_id.emplace(t.id, &t).second) {
      throw ValidationError("duplicate text id '" + t.id + "'");
    }
    if (utf8::length(t.content) > max_content_length) {
      throw ValidationError("text '" + t.id + "' exceeds maximum content length");
    }
    for (const auto& [label, tally] : t.doc_labels) {
      if (!tally.valid()) throw ValidationError("invalid rater tally '" + label + "' on '" + t.id + "'");
    }
  }
  for (const auto& s : spans) {
    auto it = by_id.find(s.span.text_id);
    if (it == by_id.end()) {
      throw ValidationError("span references unknown text '" + s.span.text_id + "'");
    }
    validate_span(*it->second, s.span);
    if (s.regard.kind() != s.span.kind) {
      throw ValidationError("regard vector kind disagrees with span kind in '" + s.span.text_id + "'");
    }
  }
}

}  // namespace dsr

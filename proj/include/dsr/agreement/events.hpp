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
#include <string>
#include <vector>

#include "dsr/core/jsonl.hpp"
#include "dsr/core/types.hpp"
#include "dsr/util/time.hpp"

namespace dsr {

// A (span, dimension) pair: the thing one slider rates.
struct UnitKey {
  std::string text_id;
  std::size_t start = 0;
  std::size_t end = 0;
  SpanKind kind = SpanKind::Character;
  Dimension dimension = Dimension::OA;

  SpanKey span_key() const { return {text_id, start, end, kind}; }
  friend auto operator<=>(const UnitKey&, const UnitKey&) = default;
};

std::string to_string(const UnitKey& unit);

// One annotator's slider value for one unit.
struct AnnotationEvent {
  std::string annotator_id;
  std::string text_id;
  std::size_t start = 0;
  std::size_t end = 0;
  SpanKind kind = SpanKind::Character;
  Dimension dimension = Dimension::OA;
  double score = 0.0;
  util::Timestamp timestamp{};

  UnitKey unit() const { return {text_id, start, end, kind, dimension}; }

  // Throws ValidationError unless score is in [-1, 1], the dimension is
  // legal for the span kind, and the offsets form a nonempty range.
  void validate() const;

  friend bool operator==(const AnnotationEvent&, const AnnotationEvent&) = default;
};

// annotations.jsonl: {"annotator","text_id","start","end","kind","dim","score","ts"}
jsonl::OrderedJson event_to_json(const AnnotationEvent& e);
AnnotationEvent event_from_json(const jsonl::Json& j);

std::vector<AnnotationEvent> read_annotations(const std::filesystem::path& path);
std::vector<AnnotationEvent> parse_annotations(std::istream& in, const std::string& label);
void write_annotations(const std::vector<AnnotationEvent>& events, std::ostream& out);

// Keeps one event per (annotator, unit): the one with the latest timestamp,
// later input position breaking ties. Result keeps input order of survivors.
std::vector<AnnotationEvent> collapse_latest(const std::vector<AnnotationEvent>& events);

}  // namespace dsr

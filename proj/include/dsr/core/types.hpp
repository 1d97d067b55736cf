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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dsr {

enum class SpanKind : std::uint8_t { Character, Topic };

// The three bipolar regard axes, in storage order.
enum class Dimension : std::uint8_t { OA = 0, VA = 1, HH = 2 };

inline constexpr std::array<Dimension, 3> kAllDimensions = {Dimension::OA, Dimension::VA,
                                                           Dimension::HH};

enum class Provenance : std::uint8_t { HumanAggregate, Model };

std::string_view to_string(SpanKind kind) noexcept;
std::string_view to_string(Dimension dim) noexcept;
std::string_view to_string(Provenance p) noexcept;
std::string_view long_name(Dimension dim) noexcept;

// Throw ValidationError on unknown names.
SpanKind parse_span_kind(std::string_view s);
Dimension parse_dimension(std::string_view s);
Provenance parse_provenance(std::string_view s);

// Topics carry only Oppose-Advocate; Characters carry all three.
constexpr std::array<bool, 3> mask_for(SpanKind kind) noexcept {
  return kind == SpanKind::Topic ? std::array<bool, 3>{true, false, false}
                                 : std::array<bool, 3>{true, true, true};
}

constexpr bool applies(SpanKind kind, Dimension dim) noexcept {
  return mask_for(kind)[static_cast<std::size_t>(dim)];
}

// Document-level rater counts, e.g. how many of five raters marked a text as
// showing Moral Outrage.
struct RaterTally {
  std::int64_t positive = 0;
  std::int64_t negative = 0;
  std::int64_t total = 0;

  bool valid() const noexcept {
    return positive >= 0 && negative >= 0 && total >= 0 && positive + negative <= total;
  }
  friend bool operator==(const RaterTally&, const RaterTally&) = default;
};

struct Text {
  std::string id;
  std::string content;  // UTF-8
  std::string source;
  std::map<std::string, RaterTally> doc_labels;

  friend bool operator==(const Text&, const Text&) = default;
};

// Character-offset range [start, end) over a text, measured in Unicode
// scalar values. Spans in one text may overlap or nest.
struct Span {
  std::string text_id;
  std::size_t start = 0;
  std::size_t end = 0;
  SpanKind kind = SpanKind::Character;
  std::string surface;

  std::size_t length() const noexcept { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

// Identity of a span without its surface; orders by (text, start, end, kind).
struct SpanKey {
  std::string text_id;
  std::size_t start = 0;
  std::size_t end = 0;
  SpanKind kind = SpanKind::Character;

  static SpanKey of(const Span& s) { return {s.text_id, s.start, s.end, s.kind}; }
  friend auto operator<=>(const SpanKey&, const SpanKey&) = default;
};

// Three regard scores in [-1, 1]. The mask is a function of the span kind and
// every dimension outside the mask holds exactly 0.0.
class RegardVector {
 public:
  RegardVector() = default;

  // Non-applicable dimensions are forced to 0.0. Throws ValidationError if an
  // applicable score is outside [-1, 1] or not finite.
  static RegardVector make(SpanKind kind, double oa, double va = 0.0, double hh = 0.0);

  // Strict variant for deserialization: a nonzero score on a masked-out
  // dimension, or a mask that disagrees with the kind, is an error.
  static RegardVector checked(SpanKind kind, const std::array<double, 3>& scores,
                              const std::array<bool, 3>& mask);

  double operator[](Dimension d) const noexcept { return scores_[static_cast<std::size_t>(d)]; }
  bool applicable(Dimension d) const noexcept { return mask_[static_cast<std::size_t>(d)]; }

  double oppose_advocate() const noexcept { return scores_[0]; }
  double victimized_aided() const noexcept { return scores_[1]; }
  double harmful_helpful() const noexcept { return scores_[2]; }

  const std::array<double, 3>& scores() const noexcept { return scores_; }
  const std::array<bool, 3>& mask() const noexcept { return mask_; }
  SpanKind kind() const noexcept { return kind_; }

  friend bool operator==(const RegardVector&, const RegardVector&) = default;

 private:
  std::array<double, 3> scores_{0.0, 0.0, 0.0};
  std::array<bool, 3> mask_{true, true, true};
  SpanKind kind_ = SpanKind::Character;
};

struct ScoredSpan {
  Span span;
  RegardVector regard;
  Provenance provenance = Provenance::HumanAggregate;

  friend bool operator==(const ScoredSpan&, const ScoredSpan&) = default;
};

struct Corpus {
  std::string name;
  std::vector<Text> texts;
  std::vector<ScoredSpan> spans;

  const Text* find_text(std::string_view id) const;

  // Spans of one text, in stored order.
  std::vector<const ScoredSpan*> spans_of(std::string_view text_id) const;

  // Checks unique ids, span offsets/surfaces, and regard masks. Throws
  // ValidationError naming the first violation.
  void validate(std::size_t max_content_length = kDefaultMaxContentLength) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

  static constexpr std::size_t kDefaultMaxContentLength = 1u << 20;
};

// Throws ValidationError unless 0 <= start < end <= length(content) and the
// surface equals content[start, end).
void validate_span(const Text& text, const Span& span);

// Builds a Span over text with its surface filled in; validates offsets.
Span make_span(const Text& text, std::size_t start, std::size_t end, SpanKind kind);

}  // namespace dsr

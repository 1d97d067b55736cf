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
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dsr/core/jsonl.hpp"
#include "dsr/core/types.hpp"

namespace dsr::analytics {

struct AnalyticsConfig {
  double sigma = 0.15;
  std::size_t min_target_count = 20;
  std::size_t top_k_targets = 15;
  std::size_t top_k_pairs = 40;
  bool haldane = true;

  // Throws ValidationError unless 0 < sigma < 1 and every count is positive.
  void validate() const;
};

// Categorical reading of a regard score: the negative and positive pole of
// each dimension.
enum class RegardLabel : std::uint8_t { Opposed, Advocated, Victimized, Aided, Harmful, Helpful };

inline constexpr std::array<RegardLabel, 6> kAllLabels = {
    RegardLabel::Opposed, RegardLabel::Advocated, RegardLabel::Victimized,
    RegardLabel::Aided,   RegardLabel::Harmful,   RegardLabel::Helpful};

std::string_view to_string(RegardLabel label) noexcept;
RegardLabel parse_label(std::string_view s);  // case-insensitive
Dimension dimension_of(RegardLabel label) noexcept;

class LabelSet {
 public:
  bool contains(RegardLabel l) const noexcept { return bits_ & bit(l); }
  void insert(RegardLabel l) noexcept { bits_ = static_cast<std::uint8_t>(bits_ | bit(l)); }
  bool empty() const noexcept { return bits_ == 0; }
  std::vector<RegardLabel> labels() const;
  // True when every label here is also in `other`.
  bool subset_of(LabelSet other) const noexcept { return (bits_ & ~other.bits_) == 0; }

  friend bool operator==(LabelSet, LabelSet) = default;

 private:
  static constexpr std::uint8_t bit(RegardLabel l) noexcept {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(l));
  }
  std::uint8_t bits_ = 0;
};

std::string to_string(LabelSet set);

// Opposed iff oa <= -sigma, Advocated iff oa >= sigma, and likewise for the
// other dimensions where the vector's mask makes them applicable.
LabelSet threshold_labels(const RegardVector& regard, double sigma);

struct Category {
  std::string name;     // e.g. "1st-Person"
  std::string display;  // e.g. "me/us"; used for graph nodes
  std::set<std::string> lemmas;
};

class CategoryLexicon {
 public:
  // The referring-phrase table: first/second person, third person female,
  // male and misc.
  static CategoryLexicon defaults();

  // {"Name (display)": ["lemma", ...], ...}; the parenthesised display part
  // is optional. Category order follows the document.
  static CategoryLexicon from_json(const jsonl::OrderedJson& j);
  static CategoryLexicon load(const std::filesystem::path& path);

  explicit CategoryLexicon(std::vector<Category> categories);

  const std::vector<Category>& categories() const noexcept { return categories_; }
  std::optional<std::size_t> find(std::string_view name) const;

  // Lowercases, strips surrounding punctuation and whitespace, and looks the
  // result up. Multiword surfaces never match.
  std::optional<std::size_t> categorize(std::string_view surface) const;

 private:
  std::vector<Category> categories_;
};

}  // namespace dsr::analytics

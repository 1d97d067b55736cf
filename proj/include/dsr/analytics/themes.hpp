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

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "dsr/analytics/labels.hpp"
#include "dsr/core/jsonl.hpp"
#include "dsr/core/types.hpp"

namespace dsr::analytics {

enum class Pattern : std::uint8_t { Harm, Help };
std::string_view to_string(Pattern p) noexcept;

struct ThemeNode {
  std::size_t frequency = 0;
  double mean_oa = 0.0;
  friend bool operator==(const ThemeNode&, const ThemeNode&) = default;
};

struct ThemeEdge {
  std::string source;
  std::string target;
  Pattern pattern = Pattern::Harm;
  std::size_t frequency = 0;
  friend bool operator==(const ThemeEdge&, const ThemeEdge&) = default;
};

// Nodes are keyed by target (a category display name or a lowercased
// surface). Edges are ranked by frequency, then pattern, source, target.
struct ThemeGraph {
  std::map<std::string, ThemeNode> nodes;
  std::vector<ThemeEdge> edges;
  friend bool operator==(const ThemeGraph&, const ThemeGraph&) = default;
};

// Node key for a span surface.
std::string target_key(std::string_view surface, const CategoryLexicon& lexicon);

// harm(A, B): hh(A) <= -sigma and va(B) <= -sigma; help(A, B): hh(A) >= sigma
// and va(B) >= sigma, over ordered pairs of distinct Character spans in one
// text. Each (text, pattern, A, B) counts once. Keeps the top_k_pairs edges
// and the nodes they touch; node frequency and mean OA cover every Character
// span of that target in the corpus.
ThemeGraph pairwise_themes(const Corpus& corpus, const AnalyticsConfig& config,
                           const CategoryLexicon& lexicon);

namespace serial {
ThemeGraph pairwise_themes(const Corpus& corpus, const AnalyticsConfig& config,
                           const CategoryLexicon& lexicon);
}

// "dot" or "json"; anything else is a ValidationError, as is an empty graph.
std::string export_graph(const ThemeGraph& graph, const std::string& format);
ThemeGraph graph_from_json(const jsonl::Json& j);

// Red (-1) through white (0) to blue (+1), as "#rrggbb".
std::string regard_color(double oa);

}  // namespace dsr::analytics

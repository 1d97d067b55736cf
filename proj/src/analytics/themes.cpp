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

#include "dsr/analytics/themes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "dsr/core/utf8.hpp"
#include "dsr/util/error.hpp"

namespace dsr::analytics {
namespace {

using PairKey = std::tuple<Pattern, std::string, std::string>;

struct CharacterSpans {
  std::vector<std::vector<std::size_t>> by_text;  // span indices, text order
};

CharacterSpans group_characters(const Corpus& corpus) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t t = 0; t < corpus.texts.size(); ++t) index.emplace(corpus.texts[t].id, t);
  CharacterSpans out;
  out.by_text.resize(corpus.texts.size());
  for (std::size_t i = 0; i < corpus.spans.size(); ++i) {
    const auto& s = corpus.spans[i];
    if (s.span.kind != SpanKind::Character) continue;
    auto it = index.find(s.span.text_id);
    if (it == index.end()) throw ValidationError("span references unknown text '" + s.span.text_id + "'");
    out.by_text[it->second].push_back(i);
  }
  return out;
}

std::vector<PairKey> text_pairs(const Corpus& corpus, const std::vector<std::size_t>& spans,
                                const std::vector<std::string>& keys, double sigma) {
  std::set<PairKey> seen;
  for (std::size_t x : spans) {
    const double hh = corpus.spans[x].regard.harmful_helpful();
    for (std::size_t y : spans) {
      if (x == y) continue;
      const double va = corpus.spans[y].regard.victimized_aided();
      if (hh <= -sigma && va <= -sigma) seen.emplace(Pattern::Harm, keys[x], keys[y]);
      if (hh >= sigma && va >= sigma) seen.emplace(Pattern::Help, keys[x], keys[y]);
    }
  }
  return {seen.begin(), seen.end()};
}

ThemeGraph assemble(const Corpus& corpus, const std::vector<std::string>& keys,
                    const std::vector<std::vector<PairKey>>& per_text,
                    const AnalyticsConfig& config) {
  std::map<PairKey, std::size_t> counts;
  for (const auto& pairs : per_text) {
    for (const auto& p : pairs) counts[p] += 1;
  }
  ThemeGraph graph;
  for (const auto& [key, n] : counts) {
    graph.edges.push_back({std::get<1>(key), std::get<2>(key), std::get<0>(key), n});
  }
  std::stable_sort(graph.edges.begin(), graph.edges.end(),
                   [](const ThemeEdge& a, const ThemeEdge& b) { return a.frequency > b.frequency; });
  if (graph.edges.size() > config.top_k_pairs) graph.edges.resize(config.top_k_pairs);

  std::set<std::string> kept;
  for (const auto& e : graph.edges) {
    kept.insert(e.source);
    kept.insert(e.target);
  }
  std::map<std::string, std::pair<std::size_t, double>> stats;
  for (std::size_t i = 0; i < corpus.spans.size(); ++i) {
    if (corpus.spans[i].span.kind != SpanKind::Character || !kept.count(keys[i])) continue;
    auto& [n, sum] = stats[keys[i]];
    n += 1;
    sum += corpus.spans[i].regard.oppose_advocate();
  }
  for (const auto& [key, stat] : stats) {
    graph.nodes[key] = {stat.first, stat.second / static_cast<double>(stat.first)};
  }
  return graph;
}

std::string dot_id(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view to_string(Pattern p) noexcept { return p == Pattern::Harm ? "harm" : "help"; }

std::string target_key(std::string_view surface, const CategoryLexicon& lexicon) {
  if (auto c = lexicon.categorize(surface)) return lexicon.categories()[*c].display;
  return utf8::ascii_lower(surface);
}

namespace serial {

ThemeGraph pairwise_themes(const Corpus& corpus, const AnalyticsConfig& config,
                           const CategoryLexicon& lexicon) {
  config.validate();
  std::vector<std::string> keys(corpus.spans.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (corpus.spans[i].span.kind == SpanKind::Character) {
      keys[i] = target_key(corpus.spans[i].span.surface, lexicon);
    }
  }
  const CharacterSpans groups = group_characters(corpus);
  std::vector<std::vector<PairKey>> per_text;
  for (const auto& spans : groups.by_text) {
    per_text.push_back(text_pairs(corpus, spans, keys, config.sigma));
  }
  return assemble(corpus, keys, per_text, config);
}

}  // namespace serial

ThemeGraph pairwise_themes(const Corpus& corpus, const AnalyticsConfig& config,
                           const CategoryLexicon& lexicon) {
  config.validate();
  std::vector<std::string> keys(corpus.spans.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(keys.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    if (corpus.spans[i].span.kind == SpanKind::Character) {
      keys[i] = target_key(corpus.spans[i].span.surface, lexicon);
    }
  }
  const CharacterSpans groups = group_characters(corpus);
  std::vector<std::vector<PairKey>> per_text(groups.by_text.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t tt = 0; tt < static_cast<std::ptrdiff_t>(per_text.size()); ++tt) {
    const auto t = static_cast<std::size_t>(tt);
    per_text[t] = text_pairs(corpus, groups.by_text[t], keys, config.sigma);
  }
  return assemble(corpus, keys, per_text, config);
}

std::string regard_color(double oa) {
  const double v = std::clamp(oa, -1.0, 1.0);
  int r = 255, g = 255, b = 255;
  if (v < 0.0) {
    g = b = static_cast<int>(std::lround(255.0 * (1.0 + v)));
  } else {
    r = g = static_cast<int>(std::lround(255.0 * (1.0 - v)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string export_graph(const ThemeGraph& graph, const std::string& format) {
  if (format != "dot" && format != "json") {
    throw ValidationError("unsupported graph format '" + format + "' (expected dot or json)");
  }
  if (graph.nodes.empty()) throw ValidationError("theme graph is empty");

  if (format == "json") {
    jsonl::OrderedJson j;
    j["nodes"] = jsonl::OrderedJson::array();
    for (const auto& [id, node] : graph.nodes) {
      j["nodes"].push_back({{"id", id}, {"frequency", node.frequency}, {"mean_oa", node.mean_oa}});
    }
    j["edges"] = jsonl::OrderedJson::array();
    for (const auto& e : graph.edges) {
      j["edges"].push_back({{"source", e.source},
                            {"target", e.target},
                            {"pattern", std::string(to_string(e.pattern))},
                            {"frequency", e.frequency}});
    }
    return j.dump(2) + "\n";
  }

  std::size_t max_node = 1;
  for (const auto& [id, node] : graph.nodes) max_node = std::max(max_node, node.frequency);
  std::size_t max_edge = 1;
  for (const auto& e : graph.edges) max_edge = std::max(max_edge, e.frequency);

  std::string dot = "digraph themes {\n";
  dot += "  node [shape=ellipse, style=filled, fontname=\"Helvetica\"];\n";
  dot += "  edge [fontname=\"Helvetica\"];\n";
  char buf[256];
  for (const auto& [id, node] : graph.nodes) {
    const double width = 0.5 + 1.5 * static_cast<double>(node.frequency) / static_cast<double>(max_node);
    std::snprintf(buf, sizeof buf,
                  " [width=%.3f, height=%.3f, fillcolor=\"%s\", frequency=%zu, mean_oa=\"%.3f\"];\n",
                  width, width / 2.0, regard_color(node.mean_oa).c_str(), node.frequency,
                  node.mean_oa);
    dot += "  " + dot_id(id) + buf;
  }
  for (const auto& e : graph.edges) {
    const double pen = 1.0 + 4.0 * static_cast<double>(e.frequency) / static_cast<double>(max_edge);
    std::snprintf(buf, sizeof buf, " [label=\"%s\", penwidth=%.3f, color=\"%s\", frequency=%zu];\n",
                  std::string(to_string(e.pattern)).c_str(), pen,
                  e.pattern == Pattern::Harm ? "#b2182b" : "#2166ac", e.frequency);
    dot += "  " + dot_id(e.source) + " -> " + dot_id(e.target) + buf;
  }
  dot += "}\n";
  return dot;
}

ThemeGraph graph_from_json(const jsonl::Json& j) {
  ThemeGraph g;
  try {
    for (const auto& n : j.at("nodes")) {
      g.nodes[n.at("id").get<std::string>()] = {n.at("frequency").get<std::size_t>(),
                                               n.at("mean_oa").get<double>()};
    }
    for (const auto& e : j.at("edges")) {
      ThemeEdge edge;
      edge.source = e.at("source").get<std::string>();
      edge.target = e.at("target").get<std::string>();
      const auto pattern = e.at("pattern").get<std::string>();
      if (pattern != "harm" && pattern != "help") {
        throw ValidationError("unknown edge pattern '" + pattern + "'");
      }
      edge.pattern = pattern == "harm" ? Pattern::Harm : Pattern::Help;
      edge.frequency = e.at("frequency").get<std::size_t>();
      if (!g.nodes.count(edge.source) || !g.nodes.count(edge.target)) {
        throw ValidationError("edge endpoint is not a node");
      }
      g.edges.push_back(std::move(edge));
    }
  } catch (const jsonl::Json::exception& e) {
    throw ValidationError(std::string("malformed graph JSON: ") + e.what());
  }
  return g;
}

}  // namespace dsr::analytics

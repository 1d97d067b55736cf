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

#include "dsr/spaneval/spaneval.hpp"

#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "dsr/core/tokenizer.hpp"
#include "dsr/util/error.hpp"

namespace dsr::spaneval {

Prf rates(const Counts& c) {
  Prf out;
  if (c.tp + c.fp > 0) out.p = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) out.r = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (out.p + out.r > 0.0) out.f1 = 2.0 * out.p * out.r / (out.p + out.r);
  return out;
}

namespace {

using TokenCell = std::tuple<std::string, std::size_t, SpanKind>;

template <typename Key>
std::map<SpanKind, Counts> compare(const std::set<Key>& gold, const std::set<Key>& pred,
                                   SpanKind (*kind_of)(const Key&)) {
  std::map<SpanKind, Counts> out{{SpanKind::Character, {}}, {SpanKind::Topic, {}}};
  for (const auto& k : pred) {
    if (gold.count(k)) {
      ++out[kind_of(k)].tp;
    } else {
      ++out[kind_of(k)].fp;
    }
  }
  for (const auto& k : gold) {
    if (!pred.count(k)) ++out[kind_of(k)].fn;
  }
  return out;
}

SpanKind span_kind(const SpanKey& k) { return k.kind; }
SpanKind cell_kind(const TokenCell& c) { return std::get<2>(c); }

}  // namespace

EvalReport evaluate_spans(const std::vector<Text>& texts, const std::vector<Span>& gold,
                          const std::vector<Span>& predicted) {
  std::unordered_map<std::string_view, std::vector<Token>> tokens;
  for (const auto& t : texts) tokens.emplace(t.id, tokenize(t.content));

  auto collect = [&](const std::vector<Span>& spans, const char* role) {
    std::set<SpanKey> keys;
    std::set<TokenCell> cells;
    for (const auto& s : spans) {
      auto it = tokens.find(s.text_id);
      if (it == tokens.end()) {
        throw ValidationError(std::string(role) + " span references text '" + s.text_id +
                              "' absent from the gold text set");
      }
      keys.insert(SpanKey::of(s));
      const auto range = covering_tokens(it->second, s.start, s.end);
      for (std::size_t i = range.first; i < range.last; ++i) cells.emplace(s.text_id, i, s.kind);
    }
    return std::make_pair(std::move(keys), std::move(cells));
  };
  const auto [gold_keys, gold_cells] = collect(gold, "gold");
  const auto [pred_keys, pred_cells] = collect(predicted, "predicted");

  EvalReport report;
  report.span_counts = compare<SpanKey>(gold_keys, pred_keys, &span_kind);
  report.token_counts = compare<TokenCell>(gold_cells, pred_cells, &cell_kind);

  Counts span_micro;
  Counts token_micro;
  for (const auto& [kind, c] : report.span_counts) {
    report.per_label[kind] = rates(c);
    span_micro += c;
  }
  for (const auto& [kind, c] : report.token_counts) token_micro += c;
  report.micro_span = rates(span_micro);
  report.micro_token = rates(token_micro);
  return report;
}

namespace {

jsonl::OrderedJson prf_json(const Prf& x) {
  jsonl::OrderedJson j;
  j["p"] = x.p;
  j["r"] = x.r;
  j["f1"] = x.f1;
  return j;
}

jsonl::OrderedJson counts_json(const Counts& c) {
  jsonl::OrderedJson j;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  return j;
}

}  // namespace

jsonl::OrderedJson report_to_json(const EvalReport& report) {
  jsonl::OrderedJson j;
  jsonl::OrderedJson per = jsonl::OrderedJson::object();
  for (const auto& [kind, prf] : report.per_label) per[std::string(to_string(kind))] = prf_json(prf);
  j["per_label"] = std::move(per);
  j["micro_span"] = prf_json(report.micro_span);
  j["micro_token"] = prf_json(report.micro_token);
  jsonl::OrderedJson counts;
  for (const auto& [kind, c] : report.span_counts) counts["span"][std::string(to_string(kind))] = counts_json(c);
  for (const auto& [kind, c] : report.token_counts) counts["token"][std::string(to_string(kind))] = counts_json(c);
  j["counts"] = std::move(counts);
  return j;
}

std::string report_table(const EvalReport& report, const std::string& row_label) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-18s| %-20s| %-20s| %-20s| %-20s\n", "", "Character (strict)",
                "Topic (strict)", "Micro Avg. (strict)", "Micro Avg. (token)");
  os << buf;
  std::snprintf(buf, sizeof buf, "%-18s|%s|%s|%s|%s\n", "", "    p     r    F1  ", "    p     r    F1  ",
                "    p     r    F1  ", "    p     r    F1  ");
  os << buf;
  auto cell = [](const Prf& x) {
    char c[32];
    std::snprintf(c, sizeof c, " %5.3f %5.3f %5.3f ", x.p, x.r, x.f1);
    return std::string(c);
  };
  const Prf none;
  auto find = [&](SpanKind k) {
    auto it = report.per_label.find(k);
    return it == report.per_label.end() ? none : it->second;
  };
  std::snprintf(buf, sizeof buf, "%-18s|%s|%s|%s|%s\n", row_label.c_str(),
                cell(find(SpanKind::Character)).c_str(), cell(find(SpanKind::Topic)).c_str(),
                cell(report.micro_span).c_str(), cell(report.micro_token).c_str());
  os << buf;
  return os.str();
}

}  // namespace dsr::spaneval

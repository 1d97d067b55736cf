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

#include "dsr/core/corpus_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "dsr/core/utf8.hpp"
#include "dsr/util/error.hpp"

namespace dsr {

using jsonl::Json;
using jsonl::OrderedJson;

namespace {

std::size_t get_offset(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ValidationError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

ScoredSpan parse_span(const Json& j, const Text& text, std::size_t length) {
  const std::size_t start = get_offset(j, "start");
  const std::size_t end = get_offset(j, "end");
  const SpanKind kind = parse_span_kind(j.at("kind").get<std::string>());
  if (!(start < end && end <= length)) {
    throw ValidationError("span [" + std::to_string(start) + "," + std::to_string(end) +
                          ") outside text '" + text.id + "' of length " + std::to_string(length));
  }
  std::array<double, 3> scores{0.0, 0.0, 0.0};
  if (auto it = j.find("scores"); it != j.end()) {
    scores[0] = it->value("oa", 0.0);
    scores[1] = it->value("va", 0.0);
    scores[2] = it->value("hh", 0.0);
  }
  std::array<bool, 3> mask = mask_for(kind);
  if (auto it = j.find("mask"); it != j.end()) {
    if (!it->is_array() || it->size() != 3) throw ValidationError("mask must have 3 booleans");
    for (std::size_t d = 0; d < 3; ++d) mask[d] = (*it)[d].get<bool>();
  }
  Provenance prov = Provenance::HumanAggregate;
  if (auto it = j.find("provenance"); it != j.end()) {
    prov = parse_provenance(it->get<std::string>());
  }
  ScoredSpan s;
  s.span = Span{text.id, start, end, kind, utf8::slice(text.content, start, end)};
  s.regard = RegardVector::checked(kind, scores, mask);
  s.provenance = prov;
  return s;
}

}  // namespace

Corpus parse_corpus(std::istream& in, const std::string& name, const std::string& label,
                    const CorpusReadOptions& opts) {
  Corpus corpus;
  corpus.name = name;
  std::unordered_set<std::string> ids;
  jsonl::for_each_line(in, label, [&](const Json& j, std::size_t) {
    Text text;
    text.id = j.at("id").get<std::string>();
    if (text.id.empty()) throw ValidationError("empty text id");
    if (!ids.insert(text.id).second) throw ValidationError("duplicate text id '" + text.id + "'");
    text.content = j.at("content").get<std::string>();
    text.source = j.value("source", std::string());
    const std::size_t length = utf8::length(text.content);
    if (length > opts.max_content_length) {
      throw ValidationError("text '" + text.id + "' exceeds maximum content length " +
                            std::to_string(opts.max_content_length));
    }
    if (auto it = j.find("doc_labels"); it != j.end()) {
      for (const auto& [label_name, tally_json] : it->items()) {
        RaterTally tally{tally_json.at("pos").get<std::int64_t>(),
                         tally_json.at("neg").get<std::int64_t>(),
                         tally_json.at("total").get<std::int64_t>()};
        if (!tally.valid()) {
          throw ValidationError("invalid rater tally for label '" + label_name + "'");
        }
        text.doc_labels.emplace(label_name, tally);
      }
    }
    if (auto it = j.find("spans"); it != j.end()) {
      for (const auto& sj : *it) corpus.spans.push_back(parse_span(sj, text, length));
    }
    corpus.texts.push_back(std::move(text));
  });
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& path, const CorpusReadOptions& opts) {
  auto in = jsonl::open_input(path);
  return parse_corpus(in, path.stem().string(), path.string(), opts);
}

OrderedJson text_to_json(const Text& text, const std::vector<const ScoredSpan*>& spans) {
  OrderedJson j;
  j["id"] = text.id;
  j["content"] = text.content;
  j["source"] = text.source;
  OrderedJson labels = OrderedJson::object();
  for (const auto& [label, tally] : text.doc_labels) {
    OrderedJson t;
    t["pos"] = tally.positive;
    t["neg"] = tally.negative;
    t["total"] = tally.total;
    labels[label] = std::move(t);
  }
  j["doc_labels"] = std::move(labels);
  OrderedJson arr = OrderedJson::array();
  for (const ScoredSpan* s : spans) {
    OrderedJson sj;
    sj["start"] = s->span.start;
    sj["end"] = s->span.end;
    sj["kind"] = std::string(to_string(s->span.kind));
    OrderedJson scores;
    scores["oa"] = s->regard.oppose_advocate();
    scores["va"] = s->regard.victimized_aided();
    scores["hh"] = s->regard.harmful_helpful();
    sj["scores"] = std::move(scores);
    sj["mask"] = OrderedJson::array({s->regard.mask()[0], s->regard.mask()[1], s->regard.mask()[2]});
    sj["provenance"] = std::string(to_string(s->provenance));
    arr.push_back(std::move(sj));
  }
  j["spans"] = std::move(arr);
  return j;
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  std::unordered_map<std::string_view, std::vector<const ScoredSpan*>> by_text;
  for (const auto& s : corpus.spans) by_text[s.span.text_id].push_back(&s);
  static const std::vector<const ScoredSpan*> kNone;
  for (const auto& text : corpus.texts) {
    auto it = by_text.find(text.id);
    out << text_to_json(text, it == by_text.end() ? kNone : it->second).dump() << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  auto out = jsonl::open_output(path);
  write_corpus(corpus, out);
  if (!out) throw Error("failed writing corpus '" + path.string() + "'");
}

std::vector<Span> parse_predictions(std::istream& in, const std::string& label,
                                    const Corpus& gold) {
  std::unordered_map<std::string_view, const Text*> texts;
  for (const auto& t : gold.texts) texts.emplace(t.id, &t);
  std::vector<Span> out;
  jsonl::for_each_line(in, label, [&](const Json& j, std::size_t) {
    const auto id = j.at("id").get<std::string>();
    auto it = texts.find(id);
    if (it == texts.end()) throw ValidationError("prediction references unknown text '" + id + "'");
    const Text& text = *it->second;
    for (const auto& sj : j.at("spans")) {
      out.push_back(make_span(text, get_offset(sj, "start"), get_offset(sj, "end"),
                              parse_span_kind(sj.at("kind").get<std::string>())));
    }
  });
  return out;
}

std::vector<Span> read_predictions(const std::filesystem::path& path, const Corpus& gold) {
  auto in = jsonl::open_input(path);
  return parse_predictions(in, path.string(), gold);
}

void write_predictions(const std::vector<Span>& spans, const Corpus& gold, std::ostream& out) {
  std::map<std::string_view, std::vector<const Span*>> by_text;
  for (const auto& s : spans) by_text[s.text_id].push_back(&s);
  for (const auto& text : gold.texts) {
    OrderedJson j;
    j["id"] = text.id;
    OrderedJson arr = OrderedJson::array();
    if (auto it = by_text.find(text.id); it != by_text.end()) {
      for (const Span* s : it->second) {
        OrderedJson sj;
        sj["start"] = s->start;
        sj["end"] = s->end;
        sj["kind"] = std::string(to_string(s->kind));
        arr.push_back(std::move(sj));
      }
    }
    j["spans"] = std::move(arr);
    out << j.dump() << '\n';
  }
}

}  // namespace dsr

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

#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <unistd.h>

#include "dsr/core/utf8.hpp"

namespace dsr::testing {

TempDir::TempDir() {
  static std::uint64_t counter = 0;
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    path_ = base / ("dsr-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

Text make_text(std::string id, std::string content) {
  Text t;
  t.id = std::move(id);
  t.content = std::move(content);
  t.source = "test";
  return t;
}

Span span_of(const Text& text, std::string_view needle, SpanKind kind, std::size_t occurrence) {
  const std::u32string hay = utf8::decode(text.content);
  const std::u32string pin = utf8::decode(needle);
  std::size_t from = 0;
  for (;;) {
    const auto at = hay.find(pin, from);
    if (at == std::u32string::npos) {
      throw std::invalid_argument("'" + std::string(needle) + "' not in '" + text.content + "'");
    }
    if (occurrence-- == 0) return make_span(text, at, at + pin.size(), kind);
    from = at + 1;
  }
}

ScoredSpan scored(const Span& span, double oa, double va, double hh) {
  return {span, RegardVector::make(span.kind, oa, va, hh), Provenance::HumanAggregate};
}

Corpus training_corpus(std::uint64_t seed) {
  Gen gen(seed);
  Corpus c;
  c.name = "training";
  std::size_t word = 0;
  for (std::size_t t = 0; t < 10; ++t) {
    std::vector<std::string> words;
    std::string content;
    for (std::size_t i = 0; i < 10; ++i) {
      words.push_back("word" + std::to_string(word++));
      if (i > 0) content += ' ';
      content += words.back();
    }
    Text text = make_text("t" + std::to_string(t), content);
    for (std::size_t i = 0; i < 5; ++i) {
      const SpanKind kind = i == 4 ? SpanKind::Topic : SpanKind::Character;
      const Span s = span_of(text, words[2 * i], kind);
      c.spans.push_back(scored(s, gen.uniform(-0.9, 0.9), gen.uniform(-0.9, 0.9),
                               gen.uniform(-0.9, 0.9)));
    }
    c.texts.push_back(std::move(text));
  }
  return c;
}

namespace {

void add(Corpus& c, const std::string& content,
         const std::vector<std::tuple<std::string, SpanKind, double, double, double>>& spans) {
  Text text = make_text("p" + std::to_string(c.texts.size()), content);
  for (const auto& [needle, kind, oa, va, hh] : spans) {
    c.spans.push_back(scored(span_of(text, needle, kind), oa, va, hh));
  }
  c.texts.push_back(std::move(text));
}

constexpr SpanKind kChar = SpanKind::Character;
constexpr SpanKind kTop = SpanKind::Topic;

}  // namespace

Corpus pairwise_corpus() {
  Corpus c;
  c.name = "pairwise";
  for (int i = 0; i < 50; ++i) {
    switch (i % 5) {
      case 0:
        add(c, "They took everything from me again.",
            {{"They", kChar, -0.62, -0.05, -0.71}, {"me", kChar, 0.35, -0.66, 0.02}});
        break;
      case 1:
        if (i < 40) {
          add(c, "The landlord evicted the tenants.",
              {{"landlord", kChar, -0.41, 0.0, -0.52}, {"tenants", kChar, 0.22, -0.48, 0.0}});
        } else {
          add(c, "Nurses cared for the patients.",
              {{"Nurses", kChar, 0.51, 0.1, 0.63}, {"patients", kChar, 0.12, 0.44, 0.0}});
        }
        break;
      case 2:
        if (i < 30) {
          add(c, "Volunteers helped the families rebuild.",
              {{"Volunteers", kChar, 0.58, 0.04, 0.49}, {"families", kChar, 0.2, 0.37, 0.0}});
        } else {
          add(c, "Nothing much happened at the council today.",
              {{"council", kTop, 0.0, 0.0, 0.0}});
        }
        break;
      case 3:
        add(c, "The weather was mild and the market stayed calm.",
            {{"weather", kTop, 0.05, 0.0, 0.0}, {"market", kTop, 0.1, 0.0, 0.0}});
        break;
      default:
        add(c, "He said the plan might hurt someone.",
            {{"He", kChar, -0.1, 0.0, -0.1}, {"someone", kChar, 0.0, -0.12, 0.0},
             {"plan", kTop, -0.2, 0.0, 0.0}});
        break;
    }
  }
  return c;
}

Corpus three_node_corpus() {
  Corpus c;
  c.name = "three";
  for (int i = 0; i < 3; ++i) {
    add(c, "The officer hurt you badly.",
        {{"officer", kChar, -0.8, 0.0, -0.7}, {"you", kChar, 0.4, -0.6, 0.0}});
  }
  add(c, "Neighbors helped you move.",
      {{"Neighbors", kChar, 0.6, 0.0, 0.5}, {"you", kChar, 0.3, 0.45, 0.0}});
  return c;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dsr::testing

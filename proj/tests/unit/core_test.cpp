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

#include <gtest/gtest.h>

#include <sstream>

#include "dsr/core/bio.hpp"
#include "dsr/core/corpus_io.hpp"
#include "dsr/core/tokenizer.hpp"
#include "dsr/core/utf8.hpp"
#include "dsr/util/error.hpp"
#include "dsr/util/key_values.hpp"
#include "dsr/util/time.hpp"
#include "fixtures.hpp"

namespace dsr {
namespace {

using testing::Gen;
using testing::make_text;
using testing::span_of;

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

TEST(Utf8, OffsetsCountScalars) {
  const std::string s = "caf\xC3\xA9 \xF0\x9F\x98\x80!";
  EXPECT_EQ(utf8::length(s), 7u);
  EXPECT_EQ(utf8::slice(s, 3, 4), "\xC3\xA9");
  EXPECT_EQ(utf8::encode(utf8::decode(s)), s);
  const auto b = utf8::boundaries(s);
  ASSERT_EQ(b.size(), 8u);
  EXPECT_EQ(b[4], 5u);
}

TEST(Utf8, RejectsMalformed) {
  EXPECT_THROW(utf8::decode("\xC0\xAF"), ValidationError);          // overlong
  EXPECT_THROW(utf8::decode("\xED\xA0\x80"), ValidationError);      // surrogate
  EXPECT_THROW(utf8::decode("ab\xE2\x82"), ValidationError);        // truncated
  EXPECT_THROW(utf8::decode("\x80"), ValidationError);              // lone continuation
}

TEST(Tokenizer, KeepsAcronymsWhole) {
  EXPECT_EQ(surfaces(tokenize("all E.U. countries .")),
            (std::vector<std::string>{"all", "E.U.", "countries", "."}));
  EXPECT_EQ(surfaces(tokenize("U.S.A. don't re-run, ok?")),
            (std::vector<std::string>{"U.S.A.", "don't", "re-run", ",", "ok", "?"}));
}

TEST(Tokenizer, OffsetsAreScalarIndices) {
  const auto tokens = tokenize("na\xC3\xAFve  idea");
  ASSERT_EQ(tokens.size(), 2u);
  EXPECT_EQ(tokens[0].start, 0u);
  EXPECT_EQ(tokens[0].end, 5u);
  EXPECT_EQ(tokens[1].start, 7u);
  EXPECT_EQ(tokens[1].end, 11u);
}

TEST(Tokenizer, CoveringTokens) {
  const auto tokens = tokenize("they hurt children");
  const auto r = covering_tokens(tokens, 3, 6);
  EXPECT_EQ(r.first, 0u);
  EXPECT_EQ(r.last, 2u);
  EXPECT_TRUE(covering_tokens(tokens, 4, 5).empty());
}

TEST(Bio, DisjointSingleTokenSpans) {
  const Text t = make_text("t", "they hurt children");
  const auto tokens = tokenize(t.content);
  const std::vector<Span> spans{make_span(t, 0, 4, SpanKind::Character),
                                make_span(t, 10, 18, SpanKind::Character)};
  EXPECT_EQ(spans_to_bio(tokens, spans),
            (std::vector<BioTag>{BioTag::BChar, BioTag::O, BioTag::BChar}));
}

TEST(Bio, NoSpansIsAllO) {
  const auto tokens = tokenize("they hurt children");
  EXPECT_EQ(spans_to_bio(tokens, {}), std::vector<BioTag>(3, BioTag::O));
}

TEST(Bio, CharacterBeatsEnclosingTopic) {
  const Text t = make_text("t", "they hurt");
  const auto tokens = tokenize(t.content);
  const std::vector<Span> spans{make_span(t, 0, 9, SpanKind::Topic),
                                make_span(t, 0, 4, SpanKind::Character)};
  EXPECT_EQ(spans_to_bio(tokens, spans), (std::vector<BioTag>{BioTag::BChar, BioTag::O}));
}

TEST(Bio, LongerThenEarlierWins) {
  const Text t = make_text("t", "a b c d");
  const auto tokens = tokenize(t.content);
  const std::vector<Span> spans{make_span(t, 2, 5, SpanKind::Character),   // b c
                                make_span(t, 0, 5, SpanKind::Character),   // a b c
                                make_span(t, 4, 7, SpanKind::Character)};  // c d
  EXPECT_EQ(spans_to_bio(tokens, spans),
            (std::vector<BioTag>{BioTag::BChar, BioTag::IChar, BioTag::IChar, BioTag::O}));
  const std::vector<Span> tie{make_span(t, 2, 5, SpanKind::Topic),
                              make_span(t, 0, 3, SpanKind::Topic)};
  EXPECT_EQ(spans_to_bio(tokens, tie),
            (std::vector<BioTag>{BioTag::BTop, BioTag::ITop, BioTag::O, BioTag::O}));
}

TEST(Bio, MisalignedSpanNamesIt) {
  const Text t = make_text("t", "they hurt");
  const auto tokens = tokenize(t.content);
  const std::vector<Span> spans{make_span(t, 1, 4, SpanKind::Character)};
  try {
    spans_to_bio(tokens, spans);
    FAIL() << "expected AlignmentError";
  } catch (const AlignmentError& e) {
    EXPECT_NE(std::string(e.what()).find("hey"), std::string::npos) << e.what();
  }
}

TEST(Bio, DecodeMergesAndRepairs) {
  const std::string content = "E.U. countries .";
  const auto tokens = tokenize(content);
  const auto merged =
      bio_to_spans("t", content, tokens, std::vector<BioTag>{BioTag::BChar, BioTag::IChar, BioTag::O});
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_EQ(merged[0].surface, "E.U. countries");
  EXPECT_EQ(merged[0].kind, SpanKind::Character);

  EXPECT_TRUE(bio_to_spans("t", content, tokens, std::vector<BioTag>(3, BioTag::O)).empty());

  const std::string two = "they hurt";
  const auto stray =
      bio_to_spans("t", two, tokenize(two), std::vector<BioTag>{BioTag::O, BioTag::ITop});
  ASSERT_EQ(stray.size(), 1u);
  EXPECT_EQ(stray[0].kind, SpanKind::Topic);
  EXPECT_EQ(stray[0].start, 5u);
  EXPECT_EQ(stray[0].end, 9u);

  EXPECT_THROW(bio_to_spans("t", two, tokenize(two), std::vector<BioTag>{BioTag::O}),
               ValidationError);
}

TEST(BioProperty, RoundTripOnDisjointAlignedSpans) {
  Gen gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::string content;
    const std::size_t n = gen.between(1, 12);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) content += gen.coin(0.2) ? "  " : " ";
      content += gen.coin(0.15) ? "," : "w" + std::to_string(gen.index(50));
    }
    const Text t = make_text("t", content);
    const auto tokens = tokenize(content);
    std::vector<Span> spans;
    std::size_t i = 0;
    while (i < tokens.size()) {
      if (gen.coin(0.4)) {
        const std::size_t len = gen.between(1, std::min<std::size_t>(3, tokens.size() - i));
        const SpanKind kind = gen.coin() ? SpanKind::Character : SpanKind::Topic;
        spans.push_back(make_span(t, tokens[i].start, tokens[i + len - 1].end, kind));
        i += len;
        // An adjacent span of the same kind would merge under BIO only if it
        // continued with I-; B- keeps it separate, so no gap is needed.
      } else {
        ++i;
      }
    }
    const auto tags = spans_to_bio(tokens, spans);
    ASSERT_EQ(tags.size(), tokens.size());
    EXPECT_EQ(bio_to_spans("t", content, tokens, tags), spans) << content;
  }
}

Corpus sample_corpus() {
  Corpus c;
  c.name = "sample";
  Text a = make_text("a", "They hurt the children of na\xC3\xAFve towns.");
  a.doc_labels["MO"] = RaterTally{4, 1, 5};
  Text b = make_text("b", "Taxes rose again.");
  c.spans.push_back(testing::scored(span_of(a, "They", SpanKind::Character), -0.57, -0.01, -0.51));
  c.spans.push_back(testing::scored(span_of(a, "children", SpanKind::Character), 0.1, -0.8, 0.0));
  c.spans.push_back(testing::scored(span_of(a, "na\xC3\xAFve towns", SpanKind::Topic), 0.123456789));
  c.spans.push_back(testing::scored(span_of(b, "Taxes", SpanKind::Topic), -0.3));
  c.texts = {a, b};
  return c;
}

TEST(CorpusIo, WriteThenReadIsEqual) {
  const Corpus c = sample_corpus();
  std::stringstream ss;
  write_corpus(c, ss);
  const Corpus back = parse_corpus(ss, "sample", "mem");
  EXPECT_EQ(back, c);
  std::stringstream again;
  write_corpus(back, again);
  EXPECT_EQ(again.str(), ss.str());
}

TEST(CorpusIo, FileRoundTripAndEmptyFile) {
  testing::TempDir dir;
  const Corpus c = sample_corpus();
  write_corpus(c, dir / "c.jsonl");
  const Corpus back = read_corpus(dir / "c.jsonl");
  EXPECT_EQ(back.texts, c.texts);
  EXPECT_EQ(back.spans, c.spans);

  jsonl::write_file(dir / "empty.jsonl", "");
  const Corpus empty = read_corpus(dir / "empty.jsonl");
  EXPECT_TRUE(empty.texts.empty());
  EXPECT_TRUE(empty.spans.empty());
}

TEST(CorpusIo, BadOffsetRejectedWithLineNumber) {
  std::istringstream in(
      R"({"id":"a","content":"abc","spans":[]})"
      "\n"
      R"({"id":"b","content":"abc","spans":[{"start":1,"end":9,"kind":"Character"}]})"
      "\n");
  try {
    parse_corpus(in, "x", "bad.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("bad.jsonl:2"), std::string::npos);
  }
}

TEST(CorpusIo, DuplicateIdAndMalformedJson) {
  std::istringstream dup(R"({"id":"a","content":"x"})"
                         "\n"
                         R"({"id":"a","content":"y"})"
                         "\n");
  EXPECT_THROW(parse_corpus(dup, "x", "dup"), ValidationError);
  std::istringstream broken("{\"id\":\n");
  try {
    parse_corpus(broken, "x", "broken");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(CorpusIo, MaskedDimensionMustBeZero) {
  std::istringstream in(
      R"({"id":"a","content":"abc","spans":[{"start":0,"end":3,"kind":"Topic","scores":{"oa":0.1,"va":0.2,"hh":0}}]})"
      "\n");
  EXPECT_THROW(parse_corpus(in, "x", "m"), ParseError);
}

TEST(RegardVector, MaskedEntriesAreExactlyZero) {
  const auto v = RegardVector::make(SpanKind::Topic, 0.4, 0.9, -0.9);
  EXPECT_EQ(v.scores(), (std::array<double, 3>{0.4, 0.0, 0.0}));
  EXPECT_FALSE(v.applicable(Dimension::VA));
  EXPECT_THROW(RegardVector::make(SpanKind::Character, 1.5), ValidationError);
  EXPECT_THROW(RegardVector::make(SpanKind::Character, std::nan("")), ValidationError);
  EXPECT_THROW(RegardVector::checked(SpanKind::Topic, {0.1, 0.2, 0.0}, {true, false, false}),
               ValidationError);
}

TEST(Predictions, RoundTripAgainstGold) {
  const Corpus c = sample_corpus();
  std::vector<Span> spans;
  for (const auto& s : c.spans) spans.push_back(s.span);
  std::stringstream ss;
  write_predictions(spans, c, ss);
  EXPECT_EQ(parse_predictions(ss, "p", c), spans);
  std::istringstream unknown(R"({"id":"zzz","spans":[]})");
  EXPECT_THROW(parse_predictions(unknown, "p", c), ValidationError);
}

TEST(KeyValues, ParsesAndRejects) {
  const auto kv = util::parse_key_values("# c\nlr = 0.01\n\nseed=3\n", "cfg");
  EXPECT_EQ(kv.at("lr"), "0.01");
  EXPECT_EQ(kv.at("seed"), "3");
  EXPECT_THROW(util::parse_key_values("a=1\na=2\n", "cfg"), ParseError);
  EXPECT_THROW(util::parse_key_values("novalue\n", "cfg"), ParseError);
}

TEST(Time, FormatsAndParsesUtc) {
  const auto ts = util::parse_utc("2024-03-01T12:34:56.789Z");
  EXPECT_EQ(util::format_utc(ts), "2024-03-01T12:34:56.789Z");
  EXPECT_EQ(util::format_utc(util::parse_utc("2024-03-01T00:00:00Z")), "2024-03-01T00:00:00.000Z");
  EXPECT_THROW(util::parse_utc("2024-03-01 00:00:00"), ValidationError);
}

}  // namespace
}  // namespace dsr

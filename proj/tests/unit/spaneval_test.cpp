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

#include "dsr/core/tokenizer.hpp"
#include "dsr/spaneval/spaneval.hpp"
#include "dsr/util/error.hpp"
#include "fixtures.hpp"

namespace dsr::spaneval {
namespace {

using testing::Gen;
using testing::make_text;

constexpr SpanKind kChar = SpanKind::Character;
constexpr SpanKind kTop = SpanKind::Topic;

TEST(Rates, ZeroDenominators) {
  const Prf r = rates({0, 0, 0});
  EXPECT_EQ(r.p, 0.0);
  EXPECT_EQ(r.r, 0.0);
  EXPECT_EQ(r.f1, 0.0);
  const Prf half = rates({1, 1, 1});
  EXPECT_DOUBLE_EQ(half.f1, 0.5);
}

TEST(EvaluateSpans, IdentityIsPerfect) {
  const Text t = make_text("t", "They hurt the children of the town.");
  const std::vector<Span> gold{testing::span_of(t, "They", kChar),
                               testing::span_of(t, "the children", kChar),
                               testing::span_of(t, "town", kTop)};
  const auto r = evaluate_spans({t}, gold, gold);
  EXPECT_EQ(r.micro_span.f1, 1.0);
  EXPECT_EQ(r.micro_token.f1, 1.0);
  EXPECT_EQ(r.per_label.at(kChar).p, 1.0);
  EXPECT_EQ(r.per_label.at(kTop).r, 1.0);
}

TEST(EvaluateSpans, AcronymPrefixGetsTokenCreditOnly) {
  const Text t = make_text("t", "all E.U. countries .");
  const Span gold = testing::span_of(t, "E.U. countries", kChar);
  const Span pred = testing::span_of(t, "all E.U. countries", kChar);
  const auto r = evaluate_spans({t}, {gold}, {pred});
  EXPECT_EQ(r.span_counts.at(kChar), (Counts{0, 1, 1}));
  EXPECT_EQ(r.token_counts.at(kChar), (Counts{2, 1, 0}));
  EXPECT_EQ(r.micro_span.f1, 0.0);
  EXPECT_DOUBLE_EQ(r.micro_token.p, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.micro_token.r, 1.0);
}

TEST(EvaluateSpans, OffByOneTopicStart) {
  const Text t = make_text("t", "they said hello");
  const std::vector<Span> gold{make_span(t, 0, 4, kChar), make_span(t, 10, 15, kTop)};
  const std::vector<Span> pred{make_span(t, 0, 4, kChar), make_span(t, 9, 15, kTop)};
  const auto r = evaluate_spans({t}, gold, pred);
  EXPECT_DOUBLE_EQ(r.micro_span.p, 0.5);
  EXPECT_DOUBLE_EQ(r.micro_span.r, 0.5);
  // The leading space covers no token, so both token cells still match.
  EXPECT_EQ(r.token_counts.at(kTop), (Counts{1, 0, 0}));
  EXPECT_DOUBLE_EQ(r.micro_token.f1, 1.0);
}

TEST(EvaluateSpans, KindMismatchCountsBothWays) {
  const Text t = make_text("t", "they said hello");
  const auto r = evaluate_spans({t}, {make_span(t, 0, 4, kChar)}, {make_span(t, 0, 4, kTop)});
  EXPECT_EQ(r.span_counts.at(kChar), (Counts{0, 0, 1}));
  EXPECT_EQ(r.span_counts.at(kTop), (Counts{0, 1, 0}));
  EXPECT_EQ(r.token_counts.at(kChar), (Counts{0, 0, 1}));
  EXPECT_EQ(r.token_counts.at(kTop), (Counts{0, 1, 0}));
}

TEST(EvaluateSpans, UnknownTextIsAnError) {
  const Text t = make_text("t", "they said hello");
  Span stray = make_span(t, 0, 4, kChar);
  stray.text_id = "other";
  EXPECT_THROW(evaluate_spans({t}, {}, {stray}), ValidationError);
}

TEST(EvaluateSpans, StrictCanExceedTokenWhenLengthsDiffer) {
  // One exact single-token hit plus a one-token prediction inside a
  // ten-token gold span: strict F1 is 1/2, token F1 is 4/13.
  const Text t = make_text("t", "x : a b c d e f g h i j");
  const std::vector<Span> gold{testing::span_of(t, "x", kChar),
                               testing::span_of(t, "a b c d e f g h i j", kChar)};
  const std::vector<Span> pred{testing::span_of(t, "x", kChar), testing::span_of(t, "a", kChar)};
  const auto r = evaluate_spans({t}, gold, pred);
  EXPECT_DOUBLE_EQ(r.micro_span.f1, 0.5);
  EXPECT_DOUBLE_EQ(r.micro_token.f1, 4.0 / 13.0);
}

struct RandomCase {
  std::vector<Text> texts;
  std::vector<Span> gold;
  std::vector<Span> pred;
};

Span random_span(Gen& gen, const Text& t, const std::vector<Token>& tokens) {
  const std::size_t a = gen.index(tokens.size());
  const std::size_t b = std::min(tokens.size() - 1, a + gen.index(3));
  return make_span(t, tokens[a].start, tokens[b].end, gen.coin() ? kChar : kTop);
}

RandomCase random_case(Gen& gen) {
  RandomCase rc;
  for (std::size_t i = 0, n = gen.between(1, 3); i < n; ++i) {
    std::string content;
    for (std::size_t w = 0, m = gen.between(2, 10); w < m; ++w) {
      content += (w ? " " : "") + std::string(1, static_cast<char>('a' + gen.index(26)));
    }
    rc.texts.push_back(make_text("t" + std::to_string(i), content));
  }
  for (const auto& t : rc.texts) {
    const auto tokens = tokenize(t.content);
    for (std::size_t k = 0, n = gen.index(4); k < n; ++k) rc.gold.push_back(random_span(gen, t, tokens));
    for (std::size_t k = 0, n = gen.index(4); k < n; ++k) rc.pred.push_back(random_span(gen, t, tokens));
  }
  return rc;
}

TEST(SpanEvalProperty, SwapExchangesPrecisionAndRecall) {
  Gen gen(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rc = random_case(gen);
    const auto fwd = evaluate_spans(rc.texts, rc.gold, rc.pred);
    const auto bwd = evaluate_spans(rc.texts, rc.pred, rc.gold);
    EXPECT_EQ(fwd.micro_span.p, bwd.micro_span.r);
    EXPECT_EQ(fwd.micro_span.r, bwd.micro_span.p);
    EXPECT_EQ(fwd.micro_token.p, bwd.micro_token.r);
    EXPECT_EQ(fwd.micro_token.r, bwd.micro_token.p);
    EXPECT_EQ(fwd.micro_token.f1, bwd.micro_token.f1);
  }
}

TEST(SpanEvalProperty, DuplicatePredictionsChangeNothing) {
  Gen gen(32);
  for (int trial = 0; trial < 300; ++trial) {
    auto rc = random_case(gen);
    if (rc.pred.empty()) continue;
    const auto base = evaluate_spans(rc.texts, rc.gold, rc.pred);
    rc.pred.push_back(rc.pred[gen.index(rc.pred.size())]);
    const auto dup = evaluate_spans(rc.texts, rc.gold, rc.pred);
    EXPECT_EQ(dup.span_counts, base.span_counts);
    EXPECT_EQ(dup.token_counts, base.token_counts);
  }
}

TEST(SpanEvalProperty, OverlappingPairNeverLosesCreditAtTokenLevel) {
  Gen gen(33);
  for (int trial = 0; trial < 500; ++trial) {
    const auto rc = random_case(gen);
    const Text& t = rc.texts[0];
    const auto tokens = tokenize(t.content);
    const Span gold = random_span(gen, t, tokens);
    Span pred = random_span(gen, t, tokens);
    if (pred.end <= gold.start || gold.end <= pred.start) continue;
    pred = make_span(t, pred.start, pred.end, gold.kind);
    const auto r = evaluate_spans({t}, {gold}, {pred});
    EXPECT_LE(r.micro_span.f1, r.micro_token.f1);
  }
}

TEST(Report, JsonAndTable) {
  const Text t = make_text("t", "all E.U. countries .");
  const auto r = evaluate_spans({t}, {testing::span_of(t, "E.U. countries", kChar)},
                                {testing::span_of(t, "all E.U. countries", kChar)});
  const auto j = report_to_json(r);
  EXPECT_TRUE(j.contains("micro_token"));
  const std::string table = report_table(r);
  EXPECT_NE(table.find("model"), std::string::npos);
}

}  // namespace
}  // namespace dsr::spaneval

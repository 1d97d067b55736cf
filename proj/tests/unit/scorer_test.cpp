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

#include <omp.h>

#include <cmath>
#include <sstream>

#include "dsr/core/tokenizer.hpp"
#include "dsr/scorer/augment.hpp"
#include "dsr/scorer/embedding.hpp"
#include "dsr/scorer/head.hpp"
#include "dsr/scorer/kernels.hpp"
#include "dsr/scorer/train.hpp"
#include "dsr/util/error.hpp"
#include "fixtures.hpp"

namespace dsr::scorer {
namespace {

using testing::Gen;
using testing::make_text;
using testing::span_of;

constexpr SpanKind kChar = SpanKind::Character;
constexpr SpanKind kTop = SpanKind::Topic;

Batch random_batch(Gen& gen, std::size_t n, std::size_t width, bool random_masks = true) {
  Batch b;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(width);
    for (auto& v : x) v = gen.uniform(-1.0, 1.0);
    Mask m{true, true, true};
    if (random_masks && gen.coin(0.3)) m = {true, false, false};
    std::array<double, 3> t{gen.uniform(-0.9, 0.9), m[1] ? gen.uniform(-0.9, 0.9) : 0.0,
                            m[2] ? gen.uniform(-0.9, 0.9) : 0.0};
    b.push_back(x, t, m);
  }
  return b;
}

ScorerConfig small_config() {
  ScorerConfig c;
  c.h = 16;
  c.hidden = 8;
  c.epochs = 50;
  c.lr = 1e-2;
  return c;
}

// ---- test embedder ----

TEST(Embedder, TokenRowPrefixIsFrozen) {
  // Values from a standalone FNV-1a / splitmix64 implementation.
  const auto row = raw_token_row("children", 4);
  EXPECT_EQ(row[0], 0.5323996250017844);
  EXPECT_EQ(row[1], 0.5049611777780738);
  EXPECT_EQ(row[2], 0.37648075286419336);
  EXPECT_EQ(row[3], 0.41529567934241896);
}

TEST(Embedder, RawRowsDeterministicAndInRange) {
  const auto a = raw_token_row("they", 64);
  EXPECT_EQ(a, raw_token_row("they", 64));
  EXPECT_NE(a, raw_token_row("They", 64));
  for (double v : a) {
    EXPECT_GE(v, -1.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Embedder, RowsAverageNeighbours) {
  const Text t = make_text("t", "they hurt they");
  const auto e = embed_test(t, 8, 512);
  ASSERT_EQ(e.rows.rows(), 3u);
  const auto they = raw_token_row("they", 8);
  const auto hurt = raw_token_row("hurt", 8);
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_EQ(e.rows(0, k), static_cast<float>((they[k] + hurt[k]) / 2.0));
    EXPECT_EQ(e.rows(1, k), static_cast<float>((they[k] + hurt[k] + they[k]) / 3.0));
    EXPECT_EQ(e.rows(0, k), e.rows(2, k));
  }
}

TEST(Embedder, Limits) {
  EXPECT_THROW(embed_test(make_text("t", ""), 8, 512), ValidationError);
  EXPECT_THROW(embed_test(make_text("t", "   "), 8, 512), ValidationError);
  EXPECT_THROW(embed_test(make_text("t", "a b c"), 8, 2), ValidationError);
}

TEST(Embeddings, RoundTripAndErrors) {
  const Text t = make_text("t", "They hurt all E.U. countries.");
  const auto e = embed_test(t, 16, 512);
  std::stringstream ss;
  write_embeddings({e}, ss);
  const std::string text = ss.str();
  std::istringstream in(text);
  const auto back = parse_embeddings(in, "mem", 16);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], e);
  check_tiling(back[0], t);

  std::istringstream narrow(text);
  EXPECT_THROW(parse_embeddings(narrow, "mem", 17), ValidationError);

  std::istringstream empty(R"({"text_id":"t","h":2,"tokens":[],"rows":[]})");
  EXPECT_THROW(parse_embeddings(empty, "mem", 2), ValidationError);

  std::istringstream overlap(
      R"({"text_id":"t","h":1,"tokens":[{"s":"ab","start":0,"end":2},{"s":"b","start":1,"end":2}],"rows":[[0.1],[0.2]]})");
  EXPECT_THROW(parse_embeddings(overlap, "mem", 1), ValidationError);

  EmbeddedText gap = e;
  gap.tokens[1].start += 1;
  gap.tokens[1].surface = gap.tokens[1].surface.substr(1);
  EXPECT_THROW(check_tiling(gap, t), ValidationError);
}

TEST(Embeddings, WidthMismatchOnLoad) {
  const auto e = embed_test(make_text("t", "one two"), 1023, 512);
  std::stringstream ss;
  write_embeddings({e}, ss);
  EXPECT_THROW(parse_embeddings(ss, "mem", 1024), ValidationError);
}

TEST(Pool, SingleTokenAndPairs) {
  const Text t = make_text("t", "please do this for me");
  const auto e = embed_test(t, 32, 512);
  const auto single = pool_span(e, span_of(t, "this", kChar));
  for (std::size_t k = 0; k < 32; ++k) EXPECT_EQ(single[k], static_cast<double>(e.rows(2, k)));

  const auto pair = pool_span(e, span_of(t, "do this", kChar));
  for (std::size_t k = 0; k < 32; ++k) {
    const double want = (static_cast<double>(e.rows(1, k)) + static_cast<double>(e.rows(2, k))) / 2.0;
    EXPECT_NEAR(pair[k], want, 1e-15);
  }
  // A span touching part of a token still pools the whole token.
  EXPECT_EQ(pool_range(e, 11, 12), single);
  EXPECT_THROW(pool_range(e, 9, 10), ValidationError);  // the space between "do" and "this"
}

TEST(PoolProperty, LinearAndOrderFree) {
  Gen gen(3);
  const Text t = make_text("t", "a b c d e f");
  const auto e = embed_test(t, 16, 512);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t first = gen.index(6);
    const std::size_t last = gen.between(first, 5);
    const auto base = pool_range(e, e.tokens[first].start, e.tokens[last].end);

    EmbeddedText scaled = e;
    for (auto& v : scaled.rows.data()) v *= 2.0f;
    const auto doubled = pool_range(scaled, e.tokens[first].start, e.tokens[last].end);
    for (std::size_t k = 0; k < 16; ++k) EXPECT_EQ(doubled[k], 2.0 * base[k]);

    EmbeddedText reversed = e;
    for (std::size_t i = first, j = last; i < j; ++i, --j) {
      for (std::size_t k = 0; k < 16; ++k) std::swap(reversed.rows(i, k), reversed.rows(j, k));
    }
    const auto swapped = pool_range(reversed, e.tokens[first].start, e.tokens[last].end);
    for (std::size_t k = 0; k < 16; ++k) EXPECT_NEAR(swapped[k], base[k], 1e-15);
  }
}

// ---- head ----

TEST(Head, ZeroHeadPredictsZero) {
  Gen gen(1);
  const Batch b = random_batch(gen, 5, 6);
  const auto y = forward(ScoringHead::zeros(6, 4), b.inputs);
  for (double v : y.data()) EXPECT_EQ(v, 0.0);
}

TEST(Head, HandSetToyHead) {
  ScoringHead h = ScoringHead::zeros(2, 1);
  h.w1(0, 0) = 0.5;
  h.w1(0, 1) = -0.25;
  h.b1[0] = 0.1;
  h.w2(0, 0) = 1.0;
  h.w2(1, 0) = -2.0;
  h.w2(2, 0) = 0.5;
  h.b2 = {0.0, 0.1, -0.1};
  MatrixD x(1, 2);
  x(0, 0) = 1.0;
  x(0, 1) = 2.0;
  const auto y = forward(h, x);
  EXPECT_NEAR(y(0, 0), 0.09933927642943535, 1e-15);
  EXPECT_NEAR(y(0, 1), -0.09901053655017668, 1e-15);
  EXPECT_NEAR(y(0, 2), -0.05012396195461138, 1e-15);
}

TEST(Head, OutputsStayInsideOpenInterval) {
  Gen gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const ScoringHead h = ScoringHead::initialize(12, 6, gen.raw());
    const Batch b = random_batch(gen, 10, 12);
    const MatrixD y = forward(h, b.inputs);
    for (double v : y.data()) {
      EXPECT_GT(v, -1.0);
      EXPECT_LT(v, 1.0);
    }
  }
  MatrixD wrong(1, 5);
  EXPECT_THROW(forward(ScoringHead::initialize(12, 6, 1), wrong), ValidationError);
}

TEST(Head, InitializationBounds) {
  const ScoringHead h = ScoringHead::initialize(100, 25, 7);
  for (double v : h.w1.data()) EXPECT_LE(std::abs(v), 0.1);
  for (double v : h.w2.data()) EXPECT_LE(std::abs(v), 0.2);
  EXPECT_EQ(h, ScoringHead::initialize(100, 25, 7));
  EXPECT_NE(h, ScoringHead::initialize(100, 25, 8));
  EXPECT_EQ(h.parameter_count(), 100u * 25u + 25u + 3u * 25u + 3u);
}

TEST(Loss, Examples) {
  MatrixD y(1, 3), t(1, 3);
  std::vector<Mask> m{{true, false, false}};
  y(0, 0) = 0.5;
  t(0, 0) = -0.5;
  y(0, 1) = 0.9;  // masked: ignored
  EXPECT_EQ(loss(y, t, m), 1.0);
  EXPECT_EQ(loss(t, t, m), 0.0);
  std::vector<Mask> none{{false, false, false}};
  EXPECT_THROW(loss(y, t, none), UndefinedStatistic);
}

TEST(Loss, MixedMaskMatchesFlattenedList) {
  Gen gen(4);
  const Batch b = random_batch(gen, 40, 3);
  MatrixD y(40, 3);
  for (auto& v : y.data()) v = gen.uniform(-1, 1);
  long double sum = 0.0L;
  std::size_t n = 0;
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t d = 0; d < 3; ++d) {
      if (!b.masks[i][d]) continue;
      const long double e = static_cast<long double>(y(i, d)) - b.targets(i, d);
      sum += e * e;
      ++n;
    }
  }
  EXPECT_EQ(n, b.unmasked_count());
  EXPECT_NEAR(loss(y, b.targets, b.masks), static_cast<double>(sum / n), 1e-15);
}

// ---- kernels ----

TEST(Kernels, SerialAndParallelAgreeBitForBit) {
  Gen gen(8);
  omp_set_num_threads(4);
  for (int trial = 0; trial < 5; ++trial) {
    const ScoringHead h = ScoringHead::initialize(24, 10, gen.raw());
    const Batch b = random_batch(gen, 37, 24);
    kernels::ForwardCache cs, cp;
    kernels::serial::forward(h, b.inputs, cs);
    kernels::parallel::forward(h, b.inputs, cp);
    EXPECT_EQ(cs.hidden, cp.hidden);
    EXPECT_EQ(cs.output, cp.output);
    const MatrixD d = kernels::output_gradient(cs.output, b.targets, b.masks, b.unmasked_count());
    kernels::Gradients gs, gp;
    kernels::serial::backward(h, b.inputs, cs, d, gs);
    kernels::parallel::backward(h, b.inputs, cp, d, gp);
    EXPECT_EQ(gs.w1, gp.w1);
    EXPECT_EQ(gs.b1, gp.b1);
    EXPECT_EQ(gs.w2, gp.w2);
    EXPECT_EQ(gs.b2, gp.b2);
  }
  const Text t = make_text("t", "they hurt the children of the town");
  const std::vector<EmbeddedText> texts{embed_test(t, 16, 512)};
  std::vector<kernels::SpanRef> refs;
  for (std::size_t s = 0; s < 7; ++s) {
    for (std::size_t e = s; e < 7; ++e) refs.push_back({0, texts[0].tokens[s].start, texts[0].tokens[e].end});
  }
  EXPECT_EQ(kernels::serial::pool(texts, refs), kernels::parallel::pool(texts, refs));
  omp_set_num_threads(1);
}

TEST(Kernels, MaskedCellsGetZeroGradient) {
  Gen gen(9);
  const Batch b = random_batch(gen, 20, 4);
  MatrixD y(20, 3);
  for (auto& v : y.data()) v = gen.uniform(-1, 1);
  const MatrixD g = kernels::output_gradient(y, b.targets, b.masks, b.unmasked_count());
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t d = 0; d < 3; ++d) {
      if (!b.masks[i][d]) {
        EXPECT_EQ(g(i, d), 0.0);
      }
    }
  }
}

// ---- gradient check ----

TEST(GradCheck, AnalyticGradientPasses) {
  Gen gen(10);
  for (int trial = 0; trial < 10; ++trial) {
    const ScoringHead h = ScoringHead::initialize(6, 5, gen.raw());
    const Batch b = random_batch(gen, 8, 6);
    EXPECT_LT(grad_check(h, b, 1e-5), 1e-6);
  }
}

TEST(GradCheck, DoubledGradientIsCaught) {
  Gen gen(11);
  const ScoringHead h = ScoringHead::initialize(6, 5, 3);
  const Batch b = random_batch(gen, 8, 6);
  const auto doubled = [](const ScoringHead& head, const Batch& batch) {
    auto g = loss_gradient(head, batch);
    for (std::size_t i = 0; i < g.size(); ++i) g.parameter(i) *= 2.0;
    return g;
  };
  // |2g - g| / |2g| is one half for every parameter with a real gradient.
  EXPECT_NEAR(grad_check(h, b, 1e-5, doubled), 0.5, 1e-6);
}

TEST(GradCheck, ZeroHeadHasNoError) {
  Gen gen(12);
  const Batch b = random_batch(gen, 4, 3);
  EXPECT_LT(grad_check(ScoringHead::zeros(3, 2), b, 1e-5), 1e-9);
}

TEST(GradCheck, EpsilonRange) {
  Gen gen(13);
  const Batch b = random_batch(gen, 2, 3);
  const ScoringHead h = ScoringHead::zeros(3, 2);
  EXPECT_THROW(grad_check(h, b, 0.0), ValidationError);
  EXPECT_THROW(grad_check(h, b, 0.02), ValidationError);
  EXPECT_NO_THROW(grad_check(h, b, 1e-2));
}

// ---- training ----

TEST(Train, ZeroLearningRateKeepsInitialHead) {
  Gen gen(14);
  const Batch b = random_batch(gen, 10, 16);
  ScorerConfig c = small_config();
  c.lr = 0.0;
  const auto r = train(b, c);
  EXPECT_EQ(r.head, ScoringHead::initialize(16, c.hidden, c.seed));
  ASSERT_EQ(r.history.epoch_loss.size(), c.epochs);
}

TEST(Train, OneSpanConverges) {
  Gen gen(15);
  const Batch b = random_batch(gen, 1, 64, false);
  ScorerConfig c;
  c.h = 64;
  c.epochs = 500;
  const auto r = train(b, c);
  EXPECT_LT(r.history.epoch_loss.back(), 1e-4);
  for (std::size_t i = 1; i < r.history.smoothed.size(); ++i) {
    EXPECT_LE(r.history.smoothed[i], r.history.smoothed[i - 1]);
  }
}

TEST(Train, SpanOrderWithinBatchIsIrrelevant) {
  Gen gen(16);
  const Batch b = random_batch(gen, 12, 16);
  Batch p;
  std::vector<std::size_t> order(12);
  for (std::size_t i = 0; i < 12; ++i) order[i] = i;
  for (std::size_t i = 12; i > 1; --i) std::swap(order[i - 1], order[gen.index(i)]);
  for (std::size_t i : order) {
    p.push_back(b.inputs.row(i), {b.targets(i, 0), b.targets(i, 1), b.targets(i, 2)}, b.masks[i]);
  }
  const ScorerConfig c = small_config();
  EXPECT_EQ(train(b, c).head, train(p, c).head);
}

TEST(Train, MaskedTargetsNeverMatter) {
  Gen gen(17);
  const Batch b = random_batch(gen, 12, 16);
  Batch noisy = b;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    for (std::size_t d = 0; d < 3; ++d) {
      if (!noisy.masks[i][d]) noisy.targets(i, d) = gen.uniform(-50.0, 50.0);
    }
  }
  ScorerConfig c = small_config();
  c.batch_size = 5;
  EXPECT_EQ(train(b, c).head, train(noisy, c).head);
}

TEST(Train, DivergenceNamesEpoch) {
  Gen gen(18);
  const Batch b = random_batch(gen, 4, 4);
  ScoringHead bad = ScoringHead::initialize(4, 3, 1);
  ScorerConfig c = small_config();
  c.lr = 1e308;
  // Adam steps are about lr in size, so weights overflow to infinity within a
  // few epochs and the loss turns NaN.
  try {
    train(b, c, bad);
    ADD_FAILURE() << "training did not diverge";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("diverged at epoch"), std::string::npos) << e.what();
  }
}

TEST(Train, RejectsBadInput) {
  Gen gen(19);
  Batch b = random_batch(gen, 3, 4);
  EXPECT_THROW(train(Batch{}, small_config()), ValidationError);
  EXPECT_THROW(train(b, small_config(), ScoringHead::zeros(5, 2)), ValidationError);
  for (auto& m : b.masks) m = {false, false, false};
  EXPECT_THROW(train(b, small_config()), ValidationError);
}

// ---- evaluation ----

TEST(Evaluate, FivePointFixture) {
  Batch b;
  const std::array<double, 5> t{0.5, -0.25, 0.75, 0.0, -0.5};
  for (double v : t) b.push_back(std::vector<double>{0.0}, {v, v / 2.0, 0.0}, {true, true, false});
  const auto s = evaluate_scores(ScoringHead::zeros(1, 1), b);
  // Zero head predicts 0 everywhere.
  double sq = 0.0, mean = 0.0;
  for (double v : t) {
    sq += v * v;
    mean += v / 5.0;
  }
  double tot = 0.0;
  for (double v : t) tot += (v - mean) * (v - mean);
  EXPECT_NEAR(*s[0].rmse, std::sqrt(sq / 5.0), 1e-15);
  EXPECT_NEAR(*s[0].r2, 1.0 - sq / tot, 1e-12);
  EXPECT_EQ(s[0].n, 5u);
  EXPECT_NEAR(*s[1].rmse, std::sqrt(sq / 20.0), 1e-15);
  EXPECT_EQ(s[2].n, 0u);
  EXPECT_FALSE(s[2].rmse.has_value());
  EXPECT_FALSE(s[2].r2.has_value());
}

TEST(Evaluate, PerfectAndMeanPredictions) {
  Batch b;
  for (double v : {0.2, 0.4, 0.6}) b.push_back(std::vector<double>{0.0}, {v, 0.0, 0.0}, {true, false, false});
  ScoringHead mean_head = ScoringHead::zeros(1, 1);
  mean_head.b2[0] = std::atanh(0.4);
  const auto s = evaluate_scores(mean_head, b);
  EXPECT_NEAR(*s[0].r2, 0.0, 1e-12);

  Batch same;
  same.push_back(std::vector<double>{0.0}, {0.3, 0.0, 0.0}, {true, false, false});
  same.push_back(std::vector<double>{0.0}, {0.3, 0.0, 0.0}, {true, false, false});
  ScoringHead exact = ScoringHead::zeros(1, 1);
  exact.b2[0] = std::atanh(0.3);
  const auto p = evaluate_scores(exact, same);
  EXPECT_NEAR(*p[0].rmse, 0.0, 1e-15);
  EXPECT_FALSE(p[0].r2.has_value());  // zero target variance
  EXPECT_NE(scores_table(p).find("n/a"), std::string::npos);
}

// ---- datasets and checkpoints ----

TEST(Dataset, BuildAndScoreCorpus) {
  const Corpus c = testing::training_corpus(1);
  ScorerConfig cfg;
  cfg.h = 16;
  std::vector<EmbeddedText> e;
  for (const auto& t : c.texts) e.push_back(embed_test(t, cfg.h, cfg.text_max));
  const auto ds = build_dataset(c, e, cfg);
  ASSERT_EQ(ds.batch.size(), 50u);
  EXPECT_EQ(ds.keys[0], SpanKey::of(c.spans[0].span));
  EXPECT_EQ(ds.batch.masks[4], (Mask{true, false, false}));
  EXPECT_EQ(ds.batch.targets(4, 1), 0.0);

  const auto scored = score_corpus(ScoringHead::zeros(16, 2), c, e, cfg);
  ASSERT_EQ(scored.spans.size(), c.spans.size());
  EXPECT_EQ(scored.spans[0].provenance, Provenance::Model);
  EXPECT_EQ(scored.spans[4].regard.victimized_aided(), 0.0);

  ScorerConfig tight = cfg;
  tight.span_max = 4;
  EXPECT_THROW(build_dataset(c, e, tight), ValidationError);
  EXPECT_THROW(build_dataset(c, {}, cfg), ValidationError);
}

TEST(Checkpoint, RoundTripIsExact) {
  ScorerConfig cfg = small_config();
  cfg.seed = 99;
  const ScoringHead h = ScoringHead::initialize(16, 8, 99);
  const std::string text = checkpoint_json(h, cfg);
  const auto [back, back_cfg] = parse_checkpoint(text);
  EXPECT_EQ(back, h);
  EXPECT_EQ(back_cfg, cfg);
  EXPECT_EQ(checkpoint_json(back, back_cfg), text);

  testing::TempDir dir;
  save_checkpoint(h, cfg, dir / "m.json");
  EXPECT_EQ(load_checkpoint(dir / "m.json").first, h);
  EXPECT_THROW(parse_checkpoint("{\"format\":\"other\"}"), ValidationError);
}

TEST(Config, ParseAndValidate) {
  const auto c = parse_config("# tuned\nlr = 0.01\nepochs=3\nseed=11\n");
  EXPECT_EQ(c.lr, 0.01);
  EXPECT_EQ(c.epochs, 3u);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(parse_config(format_config(c)), c);
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
  EXPECT_THROW(parse_config("bogus=1\n"), ValidationError);
  EXPECT_THROW(parse_config("hidden=0\n"), ValidationError);
  EXPECT_THROW(parse_config("beta1=1\n"), ValidationError);
  EXPECT_NO_THROW(parse_config("lr=0\n"));
}

// ---- augmentation ----

Corpus sanctions() {
  Corpus c;
  Text t = make_text("s", "Russia sanctions hurt farmers in Ohio.");
  c.spans.push_back(testing::scored(span_of(t, "Russia", kChar), -0.6, 0.0, -0.7));
  c.spans.push_back(testing::scored(span_of(t, "farmers", kChar), 0.1, -0.8, 0.0));
  c.spans.push_back(testing::scored(span_of(t, "Ohio", kTop), 0.05));
  c.texts.push_back(t);
  return c;
}

TEST(Augment, ReplacementShiftsLaterSpans) {
  const Corpus c = sanctions();
  const auto out = augment_debias(c.texts[0], c.spans, {"World Health Organization", "China"}, {"Texas"});
  ASSERT_EQ(out.texts.size(), 5u);  // 2 + 2 + 1
  const Text& v = out.texts[0];
  EXPECT_EQ(v.id, "s/debias/0/0");
  EXPECT_EQ(v.source, "debias:s");
  EXPECT_EQ(v.content, "World Health Organization sanctions hurt farmers in Ohio.");
  const auto spans = out.spans_of(v.id);
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(spans[0]->span.surface, "World Health Organization");
  EXPECT_EQ(spans[1]->span.start, c.spans[1].span.start + 19);
  EXPECT_EQ(spans[2]->span.start, c.spans[2].span.start + 19);
  EXPECT_EQ(spans[1]->span.surface, "farmers");
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(spans[i]->regard, c.spans[i].regard);
  out.validate();

  const Text& topic = out.texts[4];
  EXPECT_EQ(topic.content, "Russia sanctions hurt farmers in Texas.");
  EXPECT_EQ(out.spans_of(topic.id)[0]->span.start, 0u);
}

TEST(Augment, IdentityReplacementReproducesSource) {
  const Corpus c = sanctions();
  const auto out = augment_debias(c.texts[0], c.spans, {"Russia"}, {"Ohio"});
  const Text& v = out.texts[0];
  EXPECT_EQ(v.content, c.texts[0].content);
  const auto spans = out.spans_of(v.id);
  ASSERT_EQ(spans.size(), c.spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    Span want = c.spans[i].span;
    want.text_id = v.id;
    EXPECT_EQ(spans[i]->span, want);
    EXPECT_EQ(spans[i]->regard, c.spans[i].regard);
  }
}

TEST(Augment, NestedAndStraddlingSpansAreDropped) {
  Text t = make_text("n", "the old mayor of Springfield spoke");
  std::vector<ScoredSpan> spans{
      testing::scored(span_of(t, "the old mayor of Springfield", kChar), 0.1, 0.1, 0.1),
      testing::scored(span_of(t, "mayor", kChar), 0.2, 0.2, 0.2),
      testing::scored(span_of(t, "Springfield spoke", kTop), 0.3)};
  const auto out = augment_debias(t, spans, {"she"}, {"x"});
  // Rewriting the long span drops the nested one and the straddling topic.
  EXPECT_EQ(out.spans_of("n/debias/0/0").size(), 1u);
  // Rewriting "mayor" keeps its encloser (which shrinks) and the later topic.
  const auto second = out.spans_of("n/debias/1/0");
  ASSERT_EQ(second.size(), 3u);
  EXPECT_EQ(second[0]->span.surface, "the old she of Springfield");
  EXPECT_EQ(second[2]->span.surface, "Springfield spoke");
  out.validate();
}

TEST(Augment, Errors) {
  const Corpus c = sanctions();
  EXPECT_THROW(augment_debias(c.texts[0], c.spans, {}, {"x"}), ValidationError);
  EXPECT_THROW(augment_debias(c.texts[0], c.spans, {"x"}, {}), ValidationError);
  EXPECT_THROW(augment_debias(c.texts[0], c.spans, {""}, {"x"}), ValidationError);
  auto foreign = c.spans;
  foreign[0].span.text_id = "other";
  EXPECT_THROW(augment_debias(c.texts[0], foreign, {"x"}, {"y"}), ValidationError);
}

TEST(Augment, CorpusKeepsSourcesFirst) {
  const Corpus c = sanctions();
  const auto out = augment_corpus(c, {"A", "B"}, {"C"});
  ASSERT_EQ(out.texts.size(), 6u);
  EXPECT_EQ(out.texts[0], c.texts[0]);
  EXPECT_EQ(out.name, "-debias");
  EXPECT_EQ(load_lexicon_lines("  China \n\n World Health Organization\r\n"),
            (std::vector<std::string>{"China", "World Health Organization"}));
}

}  // namespace
}  // namespace dsr::scorer

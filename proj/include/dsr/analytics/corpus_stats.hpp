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

#include <optional>
#include <string>
#include <vector>

#include "dsr/analytics/labels.hpp"
#include "dsr/analytics/stats.hpp"
#include "dsr/core/jsonl.hpp"
#include "dsr/core/types.hpp"

namespace dsr::analytics {

// A scored span reduced to what the log-odds analyses read.
struct LabeledSpan {
  LabelSet labels;
  std::optional<std::size_t> category;  // index into the lexicon
};

// Labels every span of the corpus (optionally only spans of `text_ids`).
std::vector<LabeledSpan> label_spans(const Corpus& corpus, const CategoryLexicon& lexicon,
                                     double sigma);
std::vector<LabeledSpan> label_spans(const Corpus& corpus, const std::vector<std::string>& text_ids,
                                     const CategoryLexicon& lexicon, double sigma);

namespace serial {
std::vector<LabeledSpan> label_spans(const Corpus& corpus, const CategoryLexicon& lexicon,
                                     double sigma);
}

// Simple: one label. Joint: both labels on the same span. Conditional: the
// label among spans of one category (both populations are restricted to
// that category first).
struct Predicate {
  enum class Kind { Simple, Joint, Conditional } kind = Kind::Simple;
  RegardLabel label = RegardLabel::Opposed;
  RegardLabel second = RegardLabel::Opposed;  // Joint only
  std::size_t category = 0;                   // Conditional only

  static Predicate simple(RegardLabel l) { return {Kind::Simple, l, l, 0}; }
  static Predicate joint(RegardLabel a, RegardLabel b) { return {Kind::Joint, a, b, 0}; }
  static Predicate conditional(RegardLabel l, std::size_t category) {
    return {Kind::Conditional, l, l, category};
  }
};

// "Opposed", "Opposed+Harmful", "Victimized|you".
std::string describe(const Predicate& p, const CategoryLexicon& lexicon);

struct LogOddsResult {
  ContingencyTable table;  // uncorrected counts
  double log_odds = 0.0;   // may be +-inf when a cell is zero and haldane is off
  bool corrected = false;  // Haldane-Anscombe +0.5 applied to the ratio
  double p = 1.0;          // Fisher exact on the uncorrected table
};

// Throws ValidationError when either population is empty, and
// UndefinedStatistic when a conditional predicate leaves a population empty.
// A table whose attribute column is all-zero or all-full has nothing to
// test; its p is reported as 1.
LogOddsResult attribute_log_odds(const std::vector<LabeledSpan>& in,
                                 const std::vector<LabeledSpan>& out, const Predicate& predicate,
                                 bool haldane = true);

// Text ids whose rater tally for `label` is at least 4/5 positive (high) or
// at least 4/5 negative (low). Texts in neither bin are left out.
struct Bins {
  std::vector<std::string> high;
  std::vector<std::string> low;
};
Bins bin_high_low(const std::vector<Text>& texts, const std::string& label);

// Welch tests of High-bin against Low-bin scores for every (category,
// dimension) pair, plus an "all" row over every span. Degenerate cells carry
// no result.
struct BinTest {
  std::string group;  // category name or "all"
  Dimension dimension = Dimension::OA;
  std::optional<WelchResult> result;
  std::size_t n_high = 0, n_low = 0;
};
std::vector<BinTest> bin_tests(const Corpus& corpus, const Bins& bins,
                               const CategoryLexicon& lexicon);

struct TargetDelta {
  std::string target;  // lowercased surface
  std::size_t n_in = 0, n_out = 0;
  double median_in = 0.0, median_out = 0.0;
  double delta = 0.0;
  std::optional<double> p;  // absent when Welch is undefined for the samples
};

// Targets seen at least min_target_count times in `corpus` and in the
// others combined, ranked by |median OA delta| (ties by target).
std::vector<TargetDelta> target_deltas(const Corpus& corpus, const std::vector<Corpus>& others,
                                       const AnalyticsConfig& config);

// Scores of the spans where `dim` applies.
std::vector<double> dimension_scores(const Corpus& corpus, Dimension dim);

// CSV "dimension,bin_lo,bin_hi,count,density"; bins tile [-1, 1] and 1.0
// falls in the last bin. Throws ValidationError for bins == 0, no scores or
// a score outside [-1, 1].
std::string export_histogram(const std::vector<double>& scores, Dimension dim, std::size_t bins);

jsonl::OrderedJson welch_to_json(const WelchResult& w);
jsonl::OrderedJson log_odds_to_json(const std::string& attribute, const LogOddsResult& r);
jsonl::OrderedJson bin_tests_to_json(const std::vector<BinTest>& tests);
jsonl::OrderedJson target_deltas_to_json(const std::vector<TargetDelta>& deltas);

}  // namespace dsr::analytics

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

#include "dsr/analytics/corpus_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_set>

#include "dsr/core/utf8.hpp"
#include "dsr/util/error.hpp"

namespace dsr::analytics {
namespace {

LabeledSpan label_one(const ScoredSpan& s, const CategoryLexicon& lexicon, double sigma) {
  LabeledSpan out;
  out.labels = threshold_labels(s.regard, sigma);
  if (s.span.kind == SpanKind::Character) out.category = lexicon.categorize(s.span.surface);
  return out;
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ValidationError("sigma must lie in (0, 1)");
}

}  // namespace

namespace serial {

std::vector<LabeledSpan> label_spans(const Corpus& corpus, const CategoryLexicon& lexicon,
                                     double sigma) {
  check_sigma(sigma);
  std::vector<LabeledSpan> out;
  out.reserve(corpus.spans.size());
  for (const auto& s : corpus.spans) out.push_back(label_one(s, lexicon, sigma));
  return out;
}

}  // namespace serial

std::vector<LabeledSpan> label_spans(const Corpus& corpus, const CategoryLexicon& lexicon,
                                     double sigma) {
  check_sigma(sigma);
  std::vector<LabeledSpan> out(corpus.spans.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(out.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    out[i] = label_one(corpus.spans[i], lexicon, sigma);
  }
  return out;
}

std::vector<LabeledSpan> label_spans(const Corpus& corpus, const std::vector<std::string>& text_ids,
                                     const CategoryLexicon& lexicon, double sigma) {
  check_sigma(sigma);
  const std::unordered_set<std::string> keep(text_ids.begin(), text_ids.end());
  std::vector<LabeledSpan> out;
  for (const auto& s : corpus.spans) {
    if (keep.count(s.span.text_id)) out.push_back(label_one(s, lexicon, sigma));
  }
  return out;
}

std::string describe(const Predicate& p, const CategoryLexicon& lexicon) {
  switch (p.kind) {
    case Predicate::Kind::Simple: return std::string(to_string(p.label));
    case Predicate::Kind::Joint:
      return std::string(to_string(p.label)) + "+" + std::string(to_string(p.second));
    case Predicate::Kind::Conditional:
      if (p.category >= lexicon.categories().size()) {
        throw ValidationError("predicate names an unknown category");
      }
      return std::string(to_string(p.label)) + "|" + lexicon.categories()[p.category].display;
  }
  return "?";
}

LogOddsResult attribute_log_odds(const std::vector<LabeledSpan>& in,
                                 const std::vector<LabeledSpan>& out, const Predicate& predicate,
                                 bool haldane) {
  if (in.empty() || out.empty()) throw ValidationError("log odds needs two nonempty populations");
  auto member = [&](const LabeledSpan& s) {
    return predicate.kind != Predicate::Kind::Conditional || s.category == predicate.category;
  };
  auto has = [&](const LabeledSpan& s) {
    if (!s.labels.contains(predicate.label)) return false;
    return predicate.kind != Predicate::Kind::Joint || s.labels.contains(predicate.second);
  };
  auto tally = [&](const std::vector<LabeledSpan>& pop, std::uint64_t& yes, std::uint64_t& no) {
    for (const auto& s : pop) {
      if (!member(s)) continue;
      (has(s) ? yes : no) += 1;
    }
  };

  LogOddsResult r;
  tally(in, r.table.a, r.table.b);
  tally(out, r.table.c, r.table.d);
  if (r.table.a + r.table.b == 0 || r.table.c + r.table.d == 0) {
    throw UndefinedStatistic("conditional attribute: a population has no spans in the category");
  }
  const auto a = static_cast<double>(r.table.a);
  const auto b = static_cast<double>(r.table.b);
  const auto c = static_cast<double>(r.table.c);
  const auto d = static_cast<double>(r.table.d);
  if (r.table.has_zero_cell() && haldane) {
    r.corrected = true;
    r.log_odds = std::log((a + 0.5) * (d + 0.5)) - std::log((b + 0.5) * (c + 0.5));
  } else {
    r.log_odds = std::log(a * d) - std::log(b * c);
  }
  r.p = r.table.has_zero_margin() ? 1.0 : fisher_exact(r.table).p_two_sided;
  return r;
}

Bins bin_high_low(const std::vector<Text>& texts, const std::string& label) {
  Bins bins;
  for (const auto& t : texts) {
    auto it = t.doc_labels.find(label);
    if (it == t.doc_labels.end()) {
      throw ValidationError("text '" + t.id + "' has no rater tally for '" + label + "'");
    }
    const RaterTally& r = it->second;
    if (!r.valid()) throw ValidationError("text '" + t.id + "' has an inconsistent rater tally");
    if (r.total == 0) {
      throw UndefinedStatistic("text '" + t.id + "' has a zero rater total for '" + label + "'");
    }
    if (5 * r.positive >= 4 * r.total) {
      bins.high.push_back(t.id);
    } else if (5 * r.negative >= 4 * r.total) {
      bins.low.push_back(t.id);
    }
  }
  return bins;
}

std::vector<BinTest> bin_tests(const Corpus& corpus, const Bins& bins,
                               const CategoryLexicon& lexicon) {
  const std::unordered_set<std::string> high(bins.high.begin(), bins.high.end());
  const std::unordered_set<std::string> low(bins.low.begin(), bins.low.end());
  std::vector<std::optional<std::size_t>> category(corpus.spans.size());
  for (std::size_t i = 0; i < corpus.spans.size(); ++i) {
    const auto& s = corpus.spans[i];
    if (s.span.kind == SpanKind::Character) category[i] = lexicon.categorize(s.span.surface);
  }

  std::vector<BinTest> out;
  const std::size_t groups = lexicon.categories().size() + 1;
  for (std::size_t g = 0; g < groups; ++g) {
    for (Dimension d : kAllDimensions) {
      BinTest test;
      test.group = g == 0 ? "all" : lexicon.categories()[g - 1].name;
      test.dimension = d;
      std::vector<double> a;
      std::vector<double> b;
      for (std::size_t i = 0; i < corpus.spans.size(); ++i) {
        const auto& s = corpus.spans[i];
        if (!s.regard.applicable(d)) continue;
        if (g > 0 && category[i] != g - 1) continue;
        if (high.count(s.span.text_id)) a.push_back(s.regard[d]);
        if (low.count(s.span.text_id)) b.push_back(s.regard[d]);
      }
      test.n_high = a.size();
      test.n_low = b.size();
      try {
        test.result = welch_t(a, b);
      } catch (const UndefinedStatistic&) {
      }
      out.push_back(std::move(test));
    }
  }
  return out;
}

std::vector<TargetDelta> target_deltas(const Corpus& corpus, const std::vector<Corpus>& others,
                                       const AnalyticsConfig& config) {
  config.validate();
  std::map<std::string, std::vector<double>> in;
  std::map<std::string, std::vector<double>> out;
  for (const auto& s : corpus.spans) {
    in[utf8::ascii_lower(s.span.surface)].push_back(s.regard.oppose_advocate());
  }
  for (const auto& other : others) {
    for (const auto& s : other.spans) {
      out[utf8::ascii_lower(s.span.surface)].push_back(s.regard.oppose_advocate());
    }
  }
  std::vector<TargetDelta> ranked;
  for (const auto& [target, scores_in] : in) {
    auto it = out.find(target);
    if (it == out.end()) continue;
    const auto& scores_out = it->second;
    if (scores_in.size() < config.min_target_count || scores_out.size() < config.min_target_count) {
      continue;
    }
    TargetDelta t;
    t.target = target;
    t.n_in = scores_in.size();
    t.n_out = scores_out.size();
    t.median_in = median(scores_in);
    t.median_out = median(scores_out);
    t.delta = t.median_in - t.median_out;
    try {
      t.p = welch_t(scores_in, scores_out).p_two_sided;
    } catch (const UndefinedStatistic&) {
    }
    ranked.push_back(std::move(t));
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const TargetDelta& x, const TargetDelta& y) {
    return std::abs(x.delta) > std::abs(y.delta);
  });
  if (ranked.size() > config.top_k_targets) ranked.resize(config.top_k_targets);
  return ranked;
}

std::vector<double> dimension_scores(const Corpus& corpus, Dimension dim) {
  std::vector<double> out;
  for (const auto& s : corpus.spans) {
    if (s.regard.applicable(dim)) out.push_back(s.regard[dim]);
  }
  return out;
}

std::string export_histogram(const std::vector<double>& scores, Dimension dim, std::size_t bins) {
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  if (scores.empty()) throw ValidationError("histogram of an empty score set");
  std::vector<std::size_t> counts(bins, 0);
  for (double v : scores) {
    if (!(v >= -1.0 && v <= 1.0)) throw ValidationError("histogram score outside [-1, 1]");
    auto idx = static_cast<std::size_t>((v + 1.0) / 2.0 * static_cast<double>(bins));
    counts[std::min(idx, bins - 1)] += 1;
  }
  const double width = 2.0 / static_cast<double>(bins);
  std::string csv = "dimension,bin_lo,bin_hi,count,density\n";
  char buf[160];
  for (std::size_t i = 0; i < bins; ++i) {
    const double lo = -1.0 + width * static_cast<double>(i);
    const double hi = i + 1 == bins ? 1.0 : -1.0 + width * static_cast<double>(i + 1);
    const double density =
        static_cast<double>(counts[i]) / (static_cast<double>(scores.size()) * width);
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%zu,%.6f\n", std::string(to_string(dim)).c_str(),
                  lo, hi, counts[i], density);
    csv += buf;
  }
  return csv;
}

jsonl::OrderedJson welch_to_json(const WelchResult& w) {
  jsonl::OrderedJson j;
  j["t"] = w.t;
  j["df"] = w.df;
  j["p"] = w.p_two_sided;
  j["stars"] = stars(w.p_two_sided);
  j["mean_a"] = w.mean_a;
  j["sd_a"] = w.sd_a;
  j["n_a"] = w.n_a;
  j["mean_b"] = w.mean_b;
  j["sd_b"] = w.sd_b;
  j["n_b"] = w.n_b;
  return j;
}

jsonl::OrderedJson log_odds_to_json(const std::string& attribute, const LogOddsResult& r) {
  jsonl::OrderedJson j;
  j["attribute"] = attribute;
  j["table"] = {r.table.a, r.table.b, r.table.c, r.table.d};
  j["log_odds"] = std::isfinite(r.log_odds) ? jsonl::OrderedJson(r.log_odds)
                                            : jsonl::OrderedJson(nullptr);
  j["corrected"] = r.corrected;
  j["p"] = r.p;
  j["stars"] = stars(r.p);
  j["n_in"] = r.table.a + r.table.b;
  j["n_out"] = r.table.c + r.table.d;
  return j;
}

jsonl::OrderedJson bin_tests_to_json(const std::vector<BinTest>& tests) {
  auto arr = jsonl::OrderedJson::array();
  for (const auto& t : tests) {
    jsonl::OrderedJson j;
    j["group"] = t.group;
    j["dim"] = std::string(to_string(t.dimension));
    j["n_high"] = t.n_high;
    j["n_low"] = t.n_low;
    j["welch"] = t.result ? welch_to_json(*t.result) : jsonl::OrderedJson(nullptr);
    arr.push_back(std::move(j));
  }
  return arr;
}

jsonl::OrderedJson target_deltas_to_json(const std::vector<TargetDelta>& deltas) {
  auto arr = jsonl::OrderedJson::array();
  for (const auto& t : deltas) {
    jsonl::OrderedJson j;
    j["target"] = t.target;
    j["n_in"] = t.n_in;
    j["n_out"] = t.n_out;
    j["median_in"] = t.median_in;
    j["median_out"] = t.median_out;
    j["delta"] = t.delta;
    j["p"] = t.p ? jsonl::OrderedJson(*t.p) : jsonl::OrderedJson(nullptr);
    j["stars"] = t.p ? stars(*t.p) : "";
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace dsr::analytics

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

#include "dsr/agreement/agreement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dsr/util/error.hpp"

namespace dsr::agreement {

std::map<UnitKey, std::vector<double>> group_units(const std::vector<AnnotationEvent>& events) {
  std::map<UnitKey, std::vector<double>> units;
  for (const auto& e : collapse_latest(events)) units[e.unit()].push_back(e.score);
  // Sorted values make every downstream sum independent of event order.
  for (auto& [unit, values] : units) std::sort(values.begin(), values.end());
  return units;
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool all_equal(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

double sum_sq_dev(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s;
}

}  // namespace

double krippendorff_alpha(std::span<const std::vector<double>> units) {
  // For a unit of m values, the ordered-pair sum of squared differences is
  // 2m * sum (v - mean)^2. Observed disagreement weights each unit by
  // 1/(m-1); expected disagreement pools every pairable value.
  double within = 0.0;
  double pooled_sum = 0.0;
  std::size_t n = 0;
  for (const auto& unit : units) {
    if (unit.size() < 2) continue;
    const auto m = static_cast<double>(unit.size());
    n += unit.size();
    pooled_sum += std::accumulate(unit.begin(), unit.end(), 0.0);
    if (all_equal(unit)) continue;
    within += 2.0 * m * sum_sq_dev(unit, mean_of(unit)) / (m - 1.0);
  }
  if (n == 0) throw UndefinedStatistic("Krippendorff's alpha undefined: no unit has two or more scores");
  if (within == 0.0) return 1.0;

  const double grand_mean = pooled_sum / static_cast<double>(n);
  double pooled_dev = 0.0;
  for (const auto& unit : units) {
    if (unit.size() < 2) continue;
    pooled_dev += sum_sq_dev(unit, grand_mean);
  }
  const double nd = static_cast<double>(n);
  const double observed = within / nd;
  const double expected = 2.0 * nd * pooled_dev / (nd * (nd - 1.0));
  return 1.0 - observed / expected;
}

AggregateResult aggregate_scores(const Corpus& corpus, const std::vector<AnnotationEvent>& events,
                                 double sd_threshold) {
  if (!(sd_threshold >= 0.0)) throw ValidationError("sd_threshold must be >= 0");

  std::unordered_map<std::string_view, std::size_t> text_index;
  for (std::size_t i = 0; i < corpus.texts.size(); ++i) text_index.emplace(corpus.texts[i].id, i);
  std::map<SpanKey, const ScoredSpan*> known;
  for (const auto& s : corpus.spans) known.emplace(SpanKey::of(s.span), &s);

  for (const auto& e : events) {
    e.validate();
    if (!text_index.count(e.text_id)) {
      throw ValidationError("annotation references unknown text '" + e.text_id + "'");
    }
    if (!known.count(e.unit().span_key())) {
      throw ValidationError("annotation references unknown span " + to_string(e.unit()));
    }
  }

  AggregateResult result;
  std::map<SpanKey, std::array<std::optional<double>, 3>> means;
  std::set<SpanKey> withheld;
  for (const auto& [unit, values] : group_units(events)) {
    const double mean = mean_of(values);
    double sd = 0.0;
    if (values.size() >= 2 && !all_equal(values)) {
      sd = std::sqrt(sum_sq_dev(values, mean) / static_cast<double>(values.size() - 1));
    }
    if (values.size() >= 2 && sd > sd_threshold) {
      result.flagged.push_back({unit, mean, sd, values.size()});
      withheld.insert(unit.span_key());
    }
    means[unit.span_key()][static_cast<std::size_t>(unit.dimension)] = mean;
  }

  std::vector<std::pair<std::size_t, SpanKey>> order;
  for (const auto& [key, dims] : means) {
    for (Dimension d : kAllDimensions) {
      if (applies(key.kind, d) && !dims[static_cast<std::size_t>(d)]) {
        throw ValidationError("span " + key.text_id + "[" + std::to_string(key.start) + "," +
                              std::to_string(key.end) + ") has no scores for dimension " +
                              std::string(to_string(d)));
      }
    }
    if (!withheld.count(key)) order.emplace_back(text_index.at(key.text_id), key);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [idx, key] : order) {
    const auto& dims = means.at(key);
    ScoredSpan s;
    s.span = known.at(key)->span;
    s.regard = RegardVector::make(key.kind, dims[0].value_or(0.0), dims[1].value_or(0.0),
                                  dims[2].value_or(0.0));
    s.provenance = Provenance::HumanAggregate;
    result.spans.push_back(std::move(s));
  }

  std::stable_sort(result.flagged.begin(), result.flagged.end(),
                   [](const FlaggedUnit& a, const FlaggedUnit& b) { return a.sd > b.sd; });
  return result;
}

namespace {

std::optional<DimensionAgreement> alpha_for(const std::vector<AnnotationEvent>& events) {
  const auto units = group_units(events);
  std::vector<std::vector<double>> values;
  values.reserve(units.size());
  DimensionAgreement out;
  for (const auto& [unit, v] : units) {
    out.n_scores += v.size();
    values.push_back(v);
  }
  out.n_units = values.size();
  try {
    out.alpha = krippendorff_alpha(values);
  } catch (const UndefinedStatistic&) {
    return std::nullopt;
  }
  return out;
}

}  // namespace

AgreementReport agreement_report(const std::vector<AnnotationEvent>& events) {
  std::array<std::vector<AnnotationEvent>, 3> by_dim;
  for (const auto& e : events) by_dim[static_cast<std::size_t>(e.dimension)].push_back(e);

  // Slots 0..2 are the dimensions, slot 3 the pooled micro set.
  std::array<std::optional<DimensionAgreement>, 4> results;
#pragma omp parallel for schedule(static)
  for (int slot = 0; slot < 4; ++slot) {
    results[slot] = alpha_for(slot < 3 ? by_dim[slot] : events);
  }

  AgreementReport report;
  for (Dimension d : kAllDimensions) {
    const auto i = static_cast<std::size_t>(d);
    if (!by_dim[i].empty()) report.n_scores[d] = collapse_latest(by_dim[i]).size();
    if (results[i]) report.per_dimension[d] = *results[i];
  }
  report.micro = results[3];
  return report;
}

jsonl::OrderedJson report_to_json(const AgreementReport& report) {
  jsonl::OrderedJson j;
  jsonl::OrderedJson dims = jsonl::OrderedJson::object();
  for (const auto& [d, n] : report.n_scores) {
    jsonl::OrderedJson e;
    auto it = report.per_dimension.find(d);
    if (it != report.per_dimension.end()) {
      e["alpha"] = it->second.alpha;
    } else {
      e["alpha"] = nullptr;
    }
    e["n_scores"] = n;
    dims[std::string(to_string(d))] = std::move(e);
  }
  j["per_dimension"] = std::move(dims);
  if (report.micro) {
    j["micro_alpha"] = report.micro->alpha;
    j["micro_n_scores"] = report.micro->n_scores;
  } else {
    j["micro_alpha"] = nullptr;
    j["micro_n_scores"] = 0;
  }
  return j;
}

std::string report_table(const AgreementReport& report) {
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof line, "%-22s %10s %10s\n", "Dimension", "alpha", "n_scores");
  os << line;
  for (const auto& [d, n] : report.n_scores) {
    auto it = report.per_dimension.find(d);
    if (it != report.per_dimension.end()) {
      std::snprintf(line, sizeof line, "%-22s %10.4f %10zu\n", std::string(long_name(d)).c_str(),
                    it->second.alpha, n);
    } else {
      std::snprintf(line, sizeof line, "%-22s %10s %10zu\n", std::string(long_name(d)).c_str(),
                    "n/a", n);
    }
    os << line;
  }
  if (report.micro) {
    std::snprintf(line, sizeof line, "%-22s %10.4f %10zu\n", "Total & Micro-Avg.", report.micro->alpha,
                  report.micro->n_scores);
  } else {
    std::snprintf(line, sizeof line, "%-22s %10s %10d\n", "Total & Micro-Avg.", "n/a", 0);
  }
  os << line;
  return os.str();
}

jsonl::OrderedJson flagged_to_json(const std::vector<FlaggedUnit>& flagged) {
  jsonl::OrderedJson arr = jsonl::OrderedJson::array();
  for (const auto& f : flagged) {
    jsonl::OrderedJson j;
    j["text_id"] = f.unit.text_id;
    j["start"] = f.unit.start;
    j["end"] = f.unit.end;
    j["kind"] = std::string(to_string(f.unit.kind));
    j["dim"] = std::string(to_string(f.unit.dimension));
    j["mean"] = f.mean;
    j["sd"] = f.sd;
    j["n"] = f.n;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace dsr::agreement

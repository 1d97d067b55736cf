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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsr/agreement/events.hpp"
#include "dsr/core/jsonl.hpp"
#include "dsr/core/types.hpp"

namespace dsr::agreement {

inline constexpr double kDefaultSdThreshold = 0.5;

struct FlaggedUnit {
  UnitKey unit;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
  std::size_t n = 0;
};

struct AggregateResult {
  std::vector<ScoredSpan> spans;     // corpus text order, then span key order
  std::vector<FlaggedUnit> flagged;  // SD descending
};

// Mean of each unit's scores (after latest-wins collapse per annotator).
// Units with at least two scores whose sample SD exceeds sd_threshold are
// flagged; a span with any flagged unit is withheld from `spans`.
//
// Throws ValidationError for events naming a text or span absent from the
// corpus, or for an annotated span missing one of its applicable dimensions.
AggregateResult aggregate_scores(const Corpus& corpus, const std::vector<AnnotationEvent>& events,
                                 double sd_threshold = kDefaultSdThreshold);

// Scores grouped by unit, after latest-wins collapse. Deterministic order.
std::map<UnitKey, std::vector<double>> group_units(const std::vector<AnnotationEvent>& events);

// Krippendorff's alpha with the interval metric (squared differences).
// Units with fewer than two values are not pairable and are ignored.
// Returns exactly 1.0 when observed disagreement is zero. Throws
// UndefinedStatistic when no unit has two or more values.
double krippendorff_alpha(std::span<const std::vector<double>> units);

struct DimensionAgreement {
  double alpha = 0.0;
  std::size_t n_scores = 0;
  std::size_t n_units = 0;
};

struct AgreementReport {
  // Dimensions whose alpha is undefined are absent.
  std::map<Dimension, DimensionAgreement> per_dimension;
  std::map<Dimension, std::size_t> n_scores;  // every dimension that had events
  std::optional<DimensionAgreement> micro;
};

// Per-dimension alpha plus a micro alpha over all units of all dimensions.
AgreementReport agreement_report(const std::vector<AnnotationEvent>& events);

jsonl::OrderedJson report_to_json(const AgreementReport& report);
std::string report_table(const AgreementReport& report);

jsonl::OrderedJson flagged_to_json(const std::vector<FlaggedUnit>& flagged);

}  // namespace dsr::agreement

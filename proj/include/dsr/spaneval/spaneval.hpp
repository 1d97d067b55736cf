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
#include <string>
#include <vector>

#include "dsr/core/jsonl.hpp"
#include "dsr/core/types.hpp"

namespace dsr::spaneval {

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const Counts&, const Counts&) = default;
};

struct Prf {
  double p = 0.0;
  double r = 0.0;
  double f1 = 0.0;
};

// p = tp/(tp+fp), r = tp/(tp+fn), f1 = 2pr/(p+r); each is 0 when its
// denominator is 0.
Prf rates(const Counts& c);

struct EvalReport {
  std::map<SpanKind, Prf> per_label;  // strict, per kind
  Prf micro_span;                     // strict, pooled over kinds
  Prf micro_token;                    // token level, pooled over kinds
  std::map<SpanKind, Counts> span_counts;
  std::map<SpanKind, Counts> token_counts;
};

// Strict span matching (exact start, end and kind) plus token-level
// matching, where each span expands to the (token, kind) cells it
// intersects under the shared tokenizer. Duplicates are collapsed. O tokens
// never count.
//
// Throws ValidationError if either list references a text absent from
// `texts`.
EvalReport evaluate_spans(const std::vector<Text>& texts, const std::vector<Span>& gold,
                          const std::vector<Span>& predicted);

jsonl::OrderedJson report_to_json(const EvalReport& report);

// Aligned text table: strict Character, Topic and micro p/r/F1 followed by
// token-level micro p/r/F1.
std::string report_table(const EvalReport& report, const std::string& row_label = "model");

}  // namespace dsr::spaneval

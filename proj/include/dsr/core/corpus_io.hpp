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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dsr/core/jsonl.hpp"
#include "dsr/core/types.hpp"

namespace dsr {

struct CorpusReadOptions {
  std::size_t max_content_length = Corpus::kDefaultMaxContentLength;
};

// corpus.jsonl: one text per line,
//   {"id","content","source","doc_labels":{name:{"pos","neg","total"}},
//    "spans":[{"start","end","kind","scores":{"oa","va","hh"},"mask":[b,b,b],
//              "provenance"}]}
// "scores", "mask" and "provenance" may be omitted on input (unscored spans);
// they default to zeros, the kind's mask, and HumanAggregate.
Corpus read_corpus(const std::filesystem::path& path, const CorpusReadOptions& opts = {});
Corpus parse_corpus(std::istream& in, const std::string& name, const std::string& label,
                    const CorpusReadOptions& opts = {});

// Writes every field in a fixed order; spans are grouped under their text in
// corpus text order, keeping their relative stored order.
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);
void write_corpus(const Corpus& corpus, std::ostream& out);

jsonl::OrderedJson text_to_json(const Text& text, const std::vector<const ScoredSpan*>& spans);

// predictions.jsonl: {"id", "spans":[{"start","end","kind"}]} per line.
// Spans are resolved against the gold texts; an unknown text id or an
// out-of-range span is an error.
std::vector<Span> read_predictions(const std::filesystem::path& path, const Corpus& gold);
std::vector<Span> parse_predictions(std::istream& in, const std::string& label,
                                    const Corpus& gold);
void write_predictions(const std::vector<Span>& spans, const Corpus& gold, std::ostream& out);

}  // namespace dsr

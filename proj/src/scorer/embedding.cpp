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

#include "dsr/scorer/embedding.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "dsr/core/jsonl.hpp"
#include "dsr/core/utf8.hpp"
#include "dsr/util/error.hpp"
#include "dsr/util/hash.hpp"

namespace dsr::scorer {

std::vector<double> raw_token_row(std::string_view surface, std::size_t h) {
  util::SplitMix64 rng(util::fnv1a64(surface));
  std::vector<double> row(h);
  for (auto& v : row) v = 2.0 * rng.next_unit() - 1.0;
  return row;
}

EmbeddedText embed_test(const Text& text, std::size_t h, std::size_t text_max) {
  if (text.content.empty()) throw ValidationError("cannot embed empty text '" + text.id + "'");
  EmbeddedText out;
  out.text_id = text.id;
  out.tokens = tokenize(text.content);
  if (out.tokens.empty()) throw ValidationError("text '" + text.id + "' has no tokens");
  if (out.tokens.size() > text_max) {
    throw ValidationError("text '" + text.id + "' has " + std::to_string(out.tokens.size()) +
                          " tokens, exceeding text_max " + std::to_string(text_max) +
                          " (truncation required)");
  }
  const std::size_t n = out.tokens.size();
  std::vector<std::vector<double>> raw;
  raw.reserve(n);
  for (const auto& t : out.tokens) raw.push_back(raw_token_row(t.surface, h));

  out.rows = MatrixF(n, h);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 < n ? i + 1 : i;
    const auto count = static_cast<double>(hi - lo + 1);
    auto row = out.rows.row(i);
    for (std::size_t k = 0; k < h; ++k) {
      double sum = 0.0;
      for (std::size_t j = lo; j <= hi; ++j) sum += raw[j][k];
      row[k] = static_cast<float>(sum / count);
    }
  }
  return out;
}

void validate_embedded(const EmbeddedText& e, std::size_t h) {
  if (e.tokens.empty()) throw ValidationError("embedded text '" + e.text_id + "' has no tokens");
  if (e.rows.rows() != e.tokens.size()) {
    throw ValidationError("embedded text '" + e.text_id + "': row count " +
                          std::to_string(e.rows.rows()) + " != token count " +
                          std::to_string(e.tokens.size()));
  }
  if (e.rows.cols() != h) {
    throw ValidationError("embedded text '" + e.text_id + "': row width " +
                          std::to_string(e.rows.cols()) + " != h " + std::to_string(h));
  }
  for (std::size_t i = 0; i < e.tokens.size(); ++i) {
    const auto& t = e.tokens[i];
    if (t.start >= t.end) throw ValidationError("embedded text '" + e.text_id + "': empty token");
    if (i > 0 && t.start < e.tokens[i - 1].end) {
      throw ValidationError("embedded text '" + e.text_id + "': tokens overlap or are out of order");
    }
  }
}

void check_tiling(const EmbeddedText& e, const Text& text) {
  const std::u32string content = utf8::decode(text.content);
  std::size_t pos = 0;
  auto check_gap = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
      if (!is_space(content[i]) && content[i] >= 0x20) {
        throw ValidationError("embedded text '" + e.text_id + "': offset gap at " +
                              std::to_string(i) + " covers non-whitespace");
      }
    }
  };
  for (const auto& t : e.tokens) {
    if (t.end > content.size() || t.start < pos) {
      throw ValidationError("embedded text '" + e.text_id + "': token [" + std::to_string(t.start) +
                            "," + std::to_string(t.end) + ") out of range or out of order");
    }
    check_gap(pos, t.start);
    if (utf8::encode(std::u32string_view(content).substr(t.start, t.end - t.start)) != t.surface) {
      throw ValidationError("embedded text '" + e.text_id + "': token '" + t.surface +
                            "' does not match the text at [" + std::to_string(t.start) + "," +
                            std::to_string(t.end) + ")");
    }
    pos = t.end;
  }
  check_gap(pos, content.size());
}

std::vector<EmbeddedText> parse_embeddings(std::istream& in, const std::string& label,
                                           std::size_t h) {
  std::vector<EmbeddedText> out;
  jsonl::for_each_line(in, label, [&](const jsonl::Json& j, std::size_t) {
    EmbeddedText e;
    e.text_id = j.at("text_id").get<std::string>();
    const auto width = j.at("h").get<std::size_t>();
    if (width != h) {
      throw ValidationError("embedding width " + std::to_string(width) + " != h " + std::to_string(h));
    }
    for (const auto& tj : j.at("tokens")) {
      e.tokens.push_back(Token{tj.at("s").get<std::string>(), tj.at("start").get<std::size_t>(),
                               tj.at("end").get<std::size_t>()});
    }
    const auto& rows = j.at("rows");
    e.rows = MatrixF(rows.size(), width);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != width) {
        throw ValidationError("row " + std::to_string(r) + " has width " +
                              std::to_string(rows[r].size()) + ", expected " + std::to_string(width));
      }
      for (std::size_t k = 0; k < width; ++k) e.rows(r, k) = static_cast<float>(rows[r][k].get<double>());
    }
    validate_embedded(e, h);
    out.push_back(std::move(e));
  });
  return out;
}

std::vector<EmbeddedText> load_embeddings(const std::filesystem::path& path, std::size_t h) {
  auto in = jsonl::open_input(path);
  return parse_embeddings(in, path.string(), h);
}

void write_embeddings(const std::vector<EmbeddedText>& texts, std::ostream& out) {
  // Each float is written as the shortest decimal of its exact double value,
  // so reading back is lossless.
  char buf[40];
  for (const auto& e : texts) {
    jsonl::OrderedJson head;
    head["text_id"] = e.text_id;
    head["h"] = e.width();
    jsonl::OrderedJson tokens = jsonl::OrderedJson::array();
    for (const auto& t : e.tokens) {
      jsonl::OrderedJson tj;
      tj["s"] = t.surface;
      tj["start"] = t.start;
      tj["end"] = t.end;
      tokens.push_back(std::move(tj));
    }
    head["tokens"] = std::move(tokens);
    std::string prefix = head.dump();
    prefix.pop_back();  // reopen the object to append rows
    out << prefix << ",\"rows\":[";
    for (std::size_t r = 0; r < e.rows.rows(); ++r) {
      if (r) out << ',';
      out << '[';
      const auto row = e.rows.row(r);
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) out << ',';
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<double>(row[k]));
        out.write(buf, p - buf);
      }
      out << ']';
    }
    out << "]}\n";
  }
}

void write_embeddings(const std::vector<EmbeddedText>& texts, const std::filesystem::path& path) {
  auto out = jsonl::open_output(path);
  write_embeddings(texts, out);
  if (!out) throw Error("failed writing embeddings '" + path.string() + "'");
}

std::vector<double> pool_range(const EmbeddedText& embedded, std::size_t start, std::size_t end) {
  const auto range = covering_tokens(embedded.tokens, start, end);
  if (range.empty()) {
    throw ValidationError("span [" + std::to_string(start) + "," + std::to_string(end) +
                          ") overlaps no token of '" + embedded.text_id + "'");
  }
  std::vector<double> pooled(embedded.width(), 0.0);
  for (std::size_t t = range.first; t < range.last; ++t) {
    const auto row = embedded.rows.row(t);
    for (std::size_t k = 0; k < pooled.size(); ++k) pooled[k] += row[k];
  }
  const auto count = static_cast<double>(range.last - range.first);
  for (auto& v : pooled) v /= count;
  return pooled;
}

std::vector<double> pool_span(const EmbeddedText& embedded, const Span& span) {
  if (span.text_id != embedded.text_id) {
    throw ValidationError("span of text '" + span.text_id + "' pooled against embeddings of '" +
                          embedded.text_id + "'");
  }
  return pool_range(embedded, span.start, span.end);
}

}  // namespace dsr::scorer

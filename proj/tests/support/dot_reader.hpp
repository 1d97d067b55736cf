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

// Minimal reader for the digraph subset the theme exporter writes:
// `id [k=v, ...];` node statements and `id -> id [k=v, ...];` edges, with
// quoted or bare ids and values. Anything else is rejected.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsr::testing {

struct DotStatement {
  std::string from;
  std::string to;  // empty for node statements
  std::map<std::string, std::string> attrs;
};

struct DotGraph {
  std::string name;
  std::vector<DotStatement> nodes;
  std::vector<DotStatement> edges;
  std::vector<DotStatement> defaults;  // node [...] / edge [...]
};

class DotReader {
 public:
  explicit DotReader(std::string text) : s_(std::move(text)) {}

  DotGraph read() {
    DotGraph g;
    expect_word("digraph");
    g.name = id();
    expect('{');
    for (;;) {
      skip();
      if (peek() == '}') {
        ++i_;
        break;
      }
      DotStatement st;
      st.from = id();
      skip();
      if (s_.compare(i_, 2, "->") == 0) {
        i_ += 2;
        st.to = id();
      }
      skip();
      if (peek() == '[') st.attrs = attrs();
      expect(';');
      if (!st.to.empty()) {
        g.edges.push_back(std::move(st));
      } else if (st.from == "node" || st.from == "edge") {
        g.defaults.push_back(std::move(st));
      } else {
        g.nodes.push_back(std::move(st));
      }
    }
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("dot: " + what + " at offset " + std::to_string(i_));
  }
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\n' || s_[i_] == '\t')) ++i_;
  }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  void expect_word(const std::string& w) {
    skip();
    if (s_.compare(i_, w.size(), w) != 0) fail("expected " + w);
    i_ += w.size();
  }
  std::string id() {
    skip();
    std::string out;
    if (peek() == '"') {
      ++i_;
      while (i_ < s_.size() && s_[i_] != '"') {
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
        out += s_[i_++];
      }
      if (peek() != '"') fail("unterminated string");
      ++i_;
      return out;
    }
    while (i_ < s_.size()) {
      const char c = s_[i_];
      const bool word = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '.' || c == '-' || c == '#';
      if (!word) break;
      if (c == '-' && i_ + 1 < s_.size() && s_[i_ + 1] == '>') break;
      out += c;
      ++i_;
    }
    if (out.empty()) fail("expected id");
    return out;
  }
  std::map<std::string, std::string> attrs() {
    std::map<std::string, std::string> out;
    expect('[');
    for (;;) {
      skip();
      if (peek() == ']') {
        ++i_;
        return out;
      }
      const std::string key = id();
      expect('=');
      out[key] = id();
      skip();
      if (peek() == ',') ++i_;
    }
  }

  std::string s_;
  std::size_t i_ = 0;
};

}  // namespace dsr::testing

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
#include <string>
#include <string_view>
#include <vector>

#include "dsr/core/types.hpp"
#include "dsr/util/hash.hpp"

namespace dsr::testing {

// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return rng_.next_uniform(lo, hi); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_.next() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + index(hi - lo + 1); }
  bool coin(double p = 0.5) { return rng_.next_unit() < p; }
  std::uint64_t raw() { return rng_.next(); }
  // Score on a 0.001 grid in [-1, 1], like a slider.
  double slider() { return static_cast<double>(between(0, 2000)) / 1000.0 - 1.0; }

 private:
  util::SplitMix64 rng_;
};

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

Text make_text(std::string id, std::string content);

// Span over the n-th occurrence of `needle` in the text (scalar offsets).
Span span_of(const Text& text, std::string_view needle, SpanKind kind, std::size_t occurrence = 0);

ScoredSpan scored(const Span& span, double oa, double va = 0.0, double hh = 0.0);

// Ten texts of ten distinct words with five scored spans each (one Topic),
// targets drawn from `seed`.
Corpus training_corpus(std::uint64_t seed);

// Fifty texts; ten of them pair a harmful "They" with a victimized "me".
// The rest carry weaker or different pairs and neutral filler.
Corpus pairwise_corpus();

// Three targets and two edges, small enough to read by eye.
Corpus three_node_corpus();

std::string read_text(const std::filesystem::path& path);

}  // namespace dsr::testing

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

#include <cstdint>
#include <string>
#include <vector>

namespace dsr::analytics {

// 2x2 table: rows in-corpus / out-corpus, columns has / lacks the attribute.
struct ContingencyTable {
  std::uint64_t a = 0, b = 0, c = 0, d = 0;

  std::uint64_t total() const noexcept { return a + b + c + d; }
  bool has_zero_cell() const noexcept { return a == 0 || b == 0 || c == 0 || d == 0; }
  bool has_zero_margin() const noexcept {
    return a + b == 0 || c + d == 0 || a + c == 0 || b + d == 0;
  }
  friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;
};

struct FisherResult {
  double odds_ratio = 0.0;  // ad/bc; +inf when bc == 0
  double p_two_sided = 1.0;
};

// Two-sided Fisher exact test: sums the hypergeometric probability of every
// table with the observed margins that is no more likely than the observed
// one (relative slack 1e-12). Throws UndefinedStatistic on a zero margin.
FisherResult fisher_exact(const ContingencyTable& table);

// Log hypergeometric probability of `a` given the table's margins.
double log_hypergeometric(std::uint64_t a, std::uint64_t row1, std::uint64_t row2,
                          std::uint64_t col1);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
  double mean_a = 0.0, sd_a = 0.0;
  double mean_b = 0.0, sd_b = 0.0;
  std::size_t n_a = 0, n_b = 0;
};

// Welch's unequal-variance t-test. Throws UndefinedStatistic when a sample
// has fewer than two values or both samples have zero variance.
WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double x, double a, double b);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

double mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);  // 0 when size < 2
double median(std::vector<double> v);            // throws on empty input

// "***" p<.0001, "**" p<.001, "*" p<.01, "~" p<.05, "" otherwise.
std::string stars(double p);

}  // namespace dsr::analytics

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

#include "dsr/analytics/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

#include "dsr/util/error.hpp"

namespace dsr::analytics {
namespace {

double lchoose(std::uint64_t n, std::uint64_t k) {
  const auto dn = static_cast<double>(n);
  const auto dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

constexpr double kBetaTolerance = 1e-12;
constexpr int kBetaMaxIterations = 100000;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_fraction(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double dm = m;
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kBetaTolerance) return h;
  }
  throw NumericError("incomplete beta continued fraction did not converge");
}

// I_x(a, b) with y = 1 - x supplied separately to keep precision near x = 1.
double incomplete_beta_xy(double x, double y, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ValidationError("incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(x, a, b) / a;
  return 1.0 - front * beta_fraction(y, b, a) / b;
}

}  // namespace

double log_hypergeometric(std::uint64_t a, std::uint64_t row1, std::uint64_t row2,
                          std::uint64_t col1) {
  return lchoose(row1, a) + lchoose(row2, col1 - a) - lchoose(row1 + row2, col1);
}

namespace {

ContingencyTable canonical_orientation(const ContingencyTable& t) {
  const std::array<ContingencyTable, 8> variants{{{t.a, t.b, t.c, t.d}, {t.b, t.a, t.d, t.c},
                                                  {t.c, t.d, t.a, t.b}, {t.d, t.c, t.b, t.a},
                                                  {t.a, t.c, t.b, t.d}, {t.c, t.a, t.d, t.b},
                                                  {t.b, t.d, t.a, t.c}, {t.d, t.b, t.c, t.a}}};
  return *std::min_element(variants.begin(), variants.end(), [](const auto& x, const auto& y) {
    return std::tie(x.a, x.b, x.c, x.d) < std::tie(y.a, y.b, y.c, y.d);
  });
}

}  // namespace

FisherResult fisher_exact(const ContingencyTable& table) {
  if (table.has_zero_margin()) {
    throw UndefinedStatistic("Fisher exact test needs every margin positive");
  }
  FisherResult out;
  const double bc = static_cast<double>(table.b) * static_cast<double>(table.c);
  const double ad = static_cast<double>(table.a) * static_cast<double>(table.d);
  out.odds_ratio = bc == 0.0 ? std::numeric_limits<double>::infinity() : ad / bc;

  // The p-value is invariant under row swaps, column swaps and transposition.
  // Summing in one canonical orientation makes it bit-identical across them.
  const ContingencyTable t = canonical_orientation(table);

  const std::uint64_t row1 = t.a + t.b;
  const std::uint64_t row2 = t.c + t.d;
  const std::uint64_t col1 = t.a + t.c;
  const std::uint64_t lo = col1 > row2 ? col1 - row2 : 0;
  const std::uint64_t hi = std::min(row1, col1);
  const double observed = log_hypergeometric(t.a, row1, row2, col1);
  const double cutoff = observed + std::log1p(1e-12);
  double p = 0.0;
  for (std::uint64_t x = lo; x <= hi; ++x) {
    const double lp = log_hypergeometric(x, row1, row2, col1);
    if (lp <= cutoff) p += std::exp(lp);
  }
  out.p_two_sided = std::min(1.0, p);
  return out;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw UndefinedStatistic("mean of an empty sample");
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> v) {
  if (v.empty()) throw UndefinedStatistic("median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double incomplete_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete beta needs x in [0, 1]");
  return incomplete_beta_xy(x, 1.0 - x, a, b);
}

double student_t_two_sided(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("Student t needs df > 0");
  if (std::isnan(t)) throw NumericError("Student t of NaN");
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  return incomplete_beta_xy(df / (df + t2), t2 / (df + t2), df / 2.0, 0.5);
}

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw UndefinedStatistic("Welch t-test needs at least two values per sample");
  }
  WelchResult r;
  r.n_a = a.size();
  r.n_b = b.size();
  r.mean_a = mean(a);
  r.mean_b = mean(b);
  r.sd_a = sample_sd(a);
  r.sd_b = sample_sd(b);
  const double va = r.sd_a * r.sd_a / static_cast<double>(r.n_a);
  const double vb = r.sd_b * r.sd_b / static_cast<double>(r.n_b);
  const double se2 = va + vb;
  if (se2 == 0.0) throw UndefinedStatistic("Welch t-test undefined: both samples are constant");
  r.t = (r.mean_a - r.mean_b) / std::sqrt(se2);
  r.df = se2 * se2 /
         (va * va / static_cast<double>(r.n_a - 1) + vb * vb / static_cast<double>(r.n_b - 1));
  r.p_two_sided = student_t_two_sided(r.t, r.df);
  return r;
}

std::string stars(double p) {
  if (p < 0.0001) return "***";
  if (p < 0.001) return "**";
  if (p < 0.01) return "*";
  if (p < 0.05) return "~";
  return "";
}

}  // namespace dsr::analytics

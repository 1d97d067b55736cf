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

// Independent reference implementations used to check the production code.
// They favour directness over speed.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace dsr::testing {

// Interval alpha by enumerating every ordered value pair within units and
// across all pairable values.
inline long double alpha_by_pairs(const std::vector<std::vector<double>>& units) {
  std::vector<double> pooled;
  long double observed = 0.0L;
  for (const auto& u : units) {
    if (u.size() < 2) continue;
    long double within = 0.0L;
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (i == j) continue;
        const long double d = static_cast<long double>(u[i]) - u[j];
        within += d * d;
      }
    }
    observed += within / static_cast<long double>(u.size() - 1);
    pooled.insert(pooled.end(), u.begin(), u.end());
  }
  const auto n = static_cast<long double>(pooled.size());
  long double expected = 0.0L;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = 0; j < pooled.size(); ++j) {
      if (i == j) continue;
      const long double d = static_cast<long double>(pooled[i]) - pooled[j];
      expected += d * d;
    }
  }
  const long double d_o = observed / n;
  const long double d_e = expected / (n * (n - 1.0L));
  if (d_o == 0.0L) return 1.0L;
  return 1.0L - d_o / d_e;
}

using u128 = unsigned __int128;

// Pascal's triangle, exact in 128 bits through row 120.
inline u128 binomial(unsigned n, unsigned k) {
  constexpr unsigned kRows = 121;
  static const std::vector<std::vector<u128>> triangle = [] {
    std::vector<std::vector<u128>> t(kRows);
    for (unsigned r = 0; r < kRows; ++r) {
      t[r].assign(r + 1, 1);
      for (unsigned c = 1; c < r; ++c) t[r][c] = t[r - 1][c - 1] + t[r - 1][c];
    }
    return t;
  }();
  if (k > n) return 0;
  if (n < kRows) return triangle[n][k];
  u128 r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;  // exact at every step
  return r;
}

// Two-sided Fisher p by exact integer enumeration of every table with the
// observed margins: tables count when their probability numerator is at
// most the observed one.
inline long double fisher_by_enumeration(unsigned a, unsigned b, unsigned c, unsigned d) {
  const unsigned r1 = a + b, r2 = c + d, c1 = a + c;
  const unsigned lo = c1 > r2 ? c1 - r2 : 0;
  const unsigned hi = r1 < c1 ? r1 : c1;
  const u128 observed = binomial(r1, a) * binomial(r2, c1 - a);
  u128 sum = 0;
  for (unsigned x = lo; x <= hi; ++x) {
    const u128 w = binomial(r1, x) * binomial(r2, c1 - x);
    if (w <= observed) sum += w;
  }
  return static_cast<long double>(sum) / static_cast<long double>(binomial(r1 + r2, c1));
}

inline long double adaptive_simpson(const std::function<long double(long double)>& f, long double a,
                                    long double b, long double fa, long double fm, long double fb,
                                    long double whole, long double tol, int depth) {
  const long double m = (a + b) / 2.0L;
  const long double lm = (a + m) / 2.0L, rm = (m + b) / 2.0L;
  const long double flm = f(lm), frm = f(rm);
  const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
  const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0L * tol) {
    return left + right + (left + right - whole) / 15.0L;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0L, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0L, depth - 1);
}

inline long double integrate(const std::function<long double(long double)>& f, long double a,
                             long double b, long double tol) {
  const long double fa = f(a), fb = f(b), fm = f((a + b) / 2.0L);
  const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

// Two-sided Student t tail by quadrature of the density over [0, |t|].
inline long double t_two_sided_by_quadrature(long double t, long double df) {
  const long double log_norm = std::lgamma((df + 1.0L) / 2.0L) - std::lgamma(df / 2.0L) -
                               0.5L * std::log(df * 3.14159265358979323846264338327950288L);
  auto density = [&](long double x) {
    return std::exp(log_norm - (df + 1.0L) / 2.0L * std::log1p(x * x / df));
  };
  const long double half = integrate(density, 0.0L, std::fabs(t), 1e-16L);
  return 1.0L - 2.0L * half;
}

struct WelchOracle {
  long double t, df, p;
};

inline WelchOracle welch_by_formula(const std::vector<double>& a, const std::vector<double>& b) {
  auto moments = [](const std::vector<double>& v, long double& mean, long double& var) {
    long double s = 0.0L;
    for (double x : v) s += x;
    mean = s / v.size();
    long double ss = 0.0L;
    for (double x : v) ss += (x - mean) * (x - mean);
    var = ss / (v.size() - 1);
  };
  long double ma, va, mb, vb;
  moments(a, ma, va);
  moments(b, mb, vb);
  const long double sa = va / a.size(), sb = vb / b.size();
  WelchOracle o;
  o.t = (ma - mb) / std::sqrt(sa + sb);
  o.df = (sa + sb) * (sa + sb) / (sa * sa / (a.size() - 1) + sb * sb / (b.size() - 1));
  o.p = t_two_sided_by_quadrature(o.t, o.df);
  return o;
}

}  // namespace dsr::testing

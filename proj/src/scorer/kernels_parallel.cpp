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

#include <atomic>
#include <cmath>
#include <string>

#include "dsr/scorer/kernels.hpp"
#include "dsr/util/error.hpp"

namespace dsr::scorer::kernels::parallel {

void forward(const ScoringHead& head, const MatrixD& inputs, ForwardCache& cache) {
  const std::size_t n = inputs.rows();
  const std::size_t hidden = head.hidden_width();
  const std::size_t width = head.input_width();
  cache.hidden = MatrixD(n, hidden);
  cache.output = MatrixD(n, 3);

  // Transposed W1 turns the inner loop into a contiguous axpy over hidden
  // units. Each hidden unit still sums b1 + w*x in ascending k.
  MatrixD w1t(width, hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    for (std::size_t k = 0; k < width; ++k) w1t(k, j) = head.w1(j, k);
  }

  std::atomic<bool> bad{false};
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto z = cache.hidden.row(i);
    std::copy(head.b1.begin(), head.b1.end(), z.begin());
    const auto x = inputs.row(i);
    for (std::size_t k = 0; k < width; ++k) {
      const double xk = x[k];
      const double* w = w1t.row(k).data();
      double* zp = z.data();
      for (std::size_t j = 0; j < hidden; ++j) zp[j] += w[j] * xk;
    }
    for (std::size_t j = 0; j < hidden; ++j) z[j] = std::tanh(z[j]);
    for (std::size_t o = 0; o < 3; ++o) {
      double acc = head.b2[o];
      for (std::size_t j = 0; j < hidden; ++j) acc += head.w2(o, j) * z[j];
      const double y = std::tanh(acc);
      if (!std::isfinite(y)) bad.store(true, std::memory_order_relaxed);
      cache.output(i, o) = y;
    }
  }
  if (bad.load()) throw NumericError("non-finite activation in forward pass");
}

void backward(const ScoringHead& head, const MatrixD& inputs, const ForwardCache& cache,
              const MatrixD& d_output, Gradients& grads) {
  grads = Gradients::zeros_like(head);
  const std::size_t n = inputs.rows();
  const std::size_t hidden = head.hidden_width();
  const std::size_t width = head.input_width();

  MatrixD dz2(n, 3);
  MatrixD dz1(n, hidden);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t o = 0; o < 3; ++o) {
      const double y = cache.output(i, o);
      dz2(i, o) = d_output(i, o) * (1.0 - y * y);
    }
    for (std::size_t j = 0; j < hidden; ++j) {
      double da = 0.0;
      for (std::size_t o = 0; o < 3; ++o) da += head.w2(o, j) * dz2(i, o);
      const double a = cache.hidden(i, j);
      dz1(i, j) = da * (1.0 - a * a);
    }
  }

  // Reductions over spans run in ascending span order per parameter, so the
  // result does not depend on how parameters are split across threads.
  for (std::size_t o = 0; o < 3; ++o) {
    for (std::size_t i = 0; i < n; ++i) {
      grads.b2[o] += dz2(i, o);
      for (std::size_t j = 0; j < hidden; ++j) grads.w2(o, j) += dz2(i, o) * cache.hidden(i, j);
    }
  }

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(hidden); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    double* g = grads.w1.row(j).data();
    for (std::size_t i = 0; i < n; ++i) {
      const double d = dz1(i, j);
      grads.b1[j] += d;
      const double* x = inputs.row(i).data();
      for (std::size_t k = 0; k < width; ++k) g[k] += d * x[k];
    }
  }
}

MatrixD pool(std::span<const EmbeddedText> texts, std::span<const SpanRef> spans) {
  const std::size_t width = texts.empty() ? 0 : texts.front().width();
  MatrixD out(spans.size(), width);
  std::atomic<bool> bad{false};
  std::string message;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t ss = 0; ss < static_cast<std::ptrdiff_t>(spans.size()); ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    try {
      const auto pooled = pool_range(texts[spans[s].text], spans[s].start, spans[s].end);
      std::copy(pooled.begin(), pooled.end(), out.row(s).begin());
    } catch (const Error& e) {
#pragma omp critical(dsr_pool_error)
      if (!bad.exchange(true)) message = e.what();
    }
  }
  if (bad.load()) throw ValidationError(message);
  return out;
}

}  // namespace dsr::scorer::kernels::parallel

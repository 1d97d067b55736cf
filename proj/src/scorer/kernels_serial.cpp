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

#include <cmath>

#include "dsr/scorer/kernels.hpp"
#include "dsr/util/error.hpp"

namespace dsr::scorer::kernels {

Gradients Gradients::zeros_like(const ScoringHead& head) {
  Gradients g;
  g.w1 = MatrixD(head.w1.rows(), head.w1.cols());
  g.b1.assign(head.b1.size(), 0.0);
  g.w2 = MatrixD(head.w2.rows(), head.w2.cols());
  g.b2.assign(head.b2.size(), 0.0);
  return g;
}

namespace {

template <typename Self>
auto& gradient_at(Self& self, std::size_t i) {
  const std::size_t n1 = self.w1.data().size();
  if (i < n1) return self.w1.data()[i];
  i -= n1;
  if (i < self.b1.size()) return self.b1[i];
  i -= self.b1.size();
  const std::size_t n2 = self.w2.data().size();
  if (i < n2) return self.w2.data()[i];
  i -= n2;
  if (i < self.b2.size()) return self.b2[i];
  throw std::out_of_range("gradient index out of range");
}

}  // namespace

double& Gradients::parameter(std::size_t i) { return gradient_at(*this, i); }
double Gradients::parameter(std::size_t i) const { return gradient_at(*this, i); }

MatrixD output_gradient(const MatrixD& predicted, const MatrixD& targets,
                        std::span<const Mask> masks, std::size_t unmasked) {
  if (unmasked == 0) throw UndefinedStatistic("no unmasked target cells");
  const auto n = static_cast<double>(unmasked);
  MatrixD g(predicted.rows(), 3);
  for (std::size_t i = 0; i < predicted.rows(); ++i) {
    for (std::size_t d = 0; d < 3; ++d) {
      if (masks[i][d]) g(i, d) = (2.0 * (predicted(i, d) - targets(i, d))) / n;
    }
  }
  return g;
}

namespace serial {

void forward(const ScoringHead& head, const MatrixD& inputs, ForwardCache& cache) {
  const std::size_t n = inputs.rows();
  const std::size_t hidden = head.hidden_width();
  const std::size_t width = head.input_width();
  cache.hidden = MatrixD(n, hidden);
  cache.output = MatrixD(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < hidden; ++j) {
      double acc = head.b1[j];
      for (std::size_t k = 0; k < width; ++k) acc += head.w1(j, k) * inputs(i, k);
      cache.hidden(i, j) = std::tanh(acc);
    }
    for (std::size_t o = 0; o < 3; ++o) {
      double acc = head.b2[o];
      for (std::size_t j = 0; j < hidden; ++j) acc += head.w2(o, j) * cache.hidden(i, j);
      const double y = std::tanh(acc);
      if (!std::isfinite(y)) throw NumericError("non-finite activation in forward pass");
      cache.output(i, o) = y;
    }
  }
}

void backward(const ScoringHead& head, const MatrixD& inputs, const ForwardCache& cache,
              const MatrixD& d_output, Gradients& grads) {
  grads = Gradients::zeros_like(head);
  const std::size_t hidden = head.hidden_width();
  const std::size_t width = head.input_width();
  for (std::size_t i = 0; i < inputs.rows(); ++i) {
    double dz2[3];
    for (std::size_t o = 0; o < 3; ++o) {
      const double y = cache.output(i, o);
      dz2[o] = d_output(i, o) * (1.0 - y * y);
    }
    for (std::size_t o = 0; o < 3; ++o) {
      grads.b2[o] += dz2[o];
      for (std::size_t j = 0; j < hidden; ++j) grads.w2(o, j) += dz2[o] * cache.hidden(i, j);
    }
    for (std::size_t j = 0; j < hidden; ++j) {
      double da = 0.0;
      for (std::size_t o = 0; o < 3; ++o) da += head.w2(o, j) * dz2[o];
      const double a = cache.hidden(i, j);
      const double dz1 = da * (1.0 - a * a);
      grads.b1[j] += dz1;
      for (std::size_t k = 0; k < width; ++k) grads.w1(j, k) += dz1 * inputs(i, k);
    }
  }
}

MatrixD pool(std::span<const EmbeddedText> texts, std::span<const SpanRef> spans) {
  const std::size_t width = texts.empty() ? 0 : texts.front().width();
  MatrixD out(spans.size(), width);
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const auto pooled = pool_range(texts[spans[s].text], spans[s].start, spans[s].end);
    std::copy(pooled.begin(), pooled.end(), out.row(s).begin());
  }
  return out;
}

}  // namespace serial
}  // namespace dsr::scorer::kernels

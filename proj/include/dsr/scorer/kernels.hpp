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

#include <span>
#include <vector>

#include "dsr/scorer/embedding.hpp"
#include "dsr/scorer/head.hpp"
#include "dsr/scorer/matrix.hpp"

// Numeric kernels of the scoring head. `serial` holds the straightforward
// reference loops; `parallel` holds the OpenMP versions used in production.
// Both accumulate every output element in the same order, so their results
// are bit-identical regardless of thread count.
namespace dsr::scorer::kernels {

struct ForwardCache {
  MatrixD hidden;  // n x hidden, tanh activations
  MatrixD output;  // n x 3, tanh activations
};

// Same shapes as ScoringHead.
struct Gradients {
  MatrixD w1;
  std::vector<double> b1;
  MatrixD w2;
  std::vector<double> b2;

  static Gradients zeros_like(const ScoringHead& head);
  double& parameter(std::size_t i);
  double parameter(std::size_t i) const;
  std::size_t size() const noexcept {
    return w1.data().size() + b1.size() + w2.data().size() + b2.size();
  }
};

// dL/dy for the masked mean squared error: 2 (y - t) / N on unmasked
// cells, exactly 0 on masked ones. N must be positive.
MatrixD output_gradient(const MatrixD& predicted, const MatrixD& targets,
                        std::span<const Mask> masks, std::size_t unmasked);

struct SpanRef {
  std::size_t text;  // index into the embedded text list
  std::size_t start;
  std::size_t end;
};

namespace serial {
void forward(const ScoringHead& head, const MatrixD& inputs, ForwardCache& cache);
void backward(const ScoringHead& head, const MatrixD& inputs, const ForwardCache& cache,
              const MatrixD& d_output, Gradients& grads);
MatrixD pool(std::span<const EmbeddedText> texts, std::span<const SpanRef> spans);
}  // namespace serial

namespace parallel {
void forward(const ScoringHead& head, const MatrixD& inputs, ForwardCache& cache);
void backward(const ScoringHead& head, const MatrixD& inputs, const ForwardCache& cache,
              const MatrixD& d_output, Gradients& grads);
MatrixD pool(std::span<const EmbeddedText> texts, std::span<const SpanRef> spans);
}  // namespace parallel

}  // namespace dsr::scorer::kernels

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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dsr/core/types.hpp"
#include "dsr/scorer/matrix.hpp"

namespace dsr::scorer {

// Two-layer regression head: y = tanh(W2 * tanh(W1 * v + b1) + b2).
struct ScoringHead {
  MatrixD w1;              // hidden x input
  std::vector<double> b1;  // hidden
  MatrixD w2;              // 3 x hidden
  std::vector<double> b2;  // 3

  std::size_t input_width() const noexcept { return w1.cols(); }
  std::size_t hidden_width() const noexcept { return w1.rows(); }
  std::size_t parameter_count() const noexcept {
    return w1.data().size() + b1.size() + w2.data().size() + b2.size();
  }

  // All-zero head.
  static ScoringHead zeros(std::size_t input, std::size_t hidden);

  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] from one splitmix64 stream
  // seeded with `seed`, filled in the order W1, b1, W2, b2 (row-major).
  // Fan-in is `input` for layer one and `hidden` for layer two.
  static ScoringHead initialize(std::size_t input, std::size_t hidden, std::uint64_t seed);

  // Parameter i in the flattening order W1, b1, W2, b2.
  double& parameter(std::size_t i);
  double parameter(std::size_t i) const;

  // Throws ValidationError on inconsistent shapes or non-finite entries.
  void validate() const;

  friend bool operator==(const ScoringHead&, const ScoringHead&) = default;
};

using Mask = std::array<bool, 3>;

// Pooled span vectors with their targets. Targets in masked-out cells are
// never read by loss, gradients, or training.
struct Batch {
  MatrixD inputs;   // n x h
  MatrixD targets;  // n x 3
  std::vector<Mask> masks;

  std::size_t size() const noexcept { return inputs.rows(); }
  std::size_t unmasked_count() const noexcept;

  // Rows [first, last) as a new batch.
  Batch slice(std::size_t first, std::size_t last) const;
  void push_back(std::span<const double> input, const std::array<double, 3>& target, const Mask& mask);
};

// Predictions for every row, each strictly inside (-1, 1). Throws
// ValidationError on a width mismatch and NumericError on non-finite values.
MatrixD forward(const ScoringHead& head, const MatrixD& inputs);

// Mean squared error over unmasked cells. Throws ValidationError on shape
// mismatch and UndefinedStatistic when every cell is masked.
double loss(const MatrixD& predicted, const MatrixD& targets, std::span<const Mask> masks);

}  // namespace dsr::scorer

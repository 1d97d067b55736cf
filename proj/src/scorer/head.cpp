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

#include "dsr/scorer/head.hpp"

#include <cmath>

#include "dsr/scorer/kernels.hpp"
#include "dsr/util/error.hpp"
#include "dsr/util/hash.hpp"

namespace dsr::scorer {

ScoringHead ScoringHead::zeros(std::size_t input, std::size_t hidden) {
  ScoringHead head;
  head.w1 = MatrixD(hidden, input);
  head.b1.assign(hidden, 0.0);
  head.w2 = MatrixD(3, hidden);
  head.b2.assign(3, 0.0);
  return head;
}

ScoringHead ScoringHead::initialize(std::size_t input, std::size_t hidden, std::uint64_t seed) {
  ScoringHead head = zeros(input, hidden);
  util::SplitMix64 rng(seed);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(input));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (auto& v : head.w1.data()) v = rng.next_uniform(-bound1, bound1);
  for (auto& v : head.b1) v = rng.next_uniform(-bound1, bound1);
  for (auto& v : head.w2.data()) v = rng.next_uniform(-bound2, bound2);
  for (auto& v : head.b2) v = rng.next_uniform(-bound2, bound2);
  return head;
}

namespace {

template <typename Self>
auto& parameter_at(Self& self, std::size_t i) {
  const std::size_t n1 = self.w1.data().size();
  if (i < n1) return self.w1.data()[i];
  i -= n1;
  if (i < self.b1.size()) return self.b1[i];
  i -= self.b1.size();
  const std::size_t n2 = self.w2.data().size();
  if (i < n2) return self.w2.data()[i];
  i -= n2;
  if (i < self.b2.size()) return self.b2[i];
  throw std::out_of_range("parameter index out of range");
}

}  // namespace

double& ScoringHead::parameter(std::size_t i) { return parameter_at(*this, i); }
double ScoringHead::parameter(std::size_t i) const { return parameter_at(*this, i); }

void ScoringHead::validate() const {
  if (b1.size() != w1.rows() || w2.rows() != 3 || w2.cols() != w1.rows() || b2.size() != 3) {
    throw ValidationError("scoring head has inconsistent shapes");
  }
  for (std::size_t i = 0; i < parameter_count(); ++i) {
    if (!std::isfinite(parameter(i))) throw ValidationError("scoring head has a non-finite parameter");
  }
}

std::size_t Batch::unmasked_count() const noexcept {
  std::size_t n = 0;
  for (const auto& m : masks) n += static_cast<std::size_t>(m[0]) + m[1] + m[2];
  return n;
}

Batch Batch::slice(std::size_t first, std::size_t last) const {
  Batch out;
  out.inputs = MatrixD(last - first, inputs.cols());
  out.targets = MatrixD(last - first, 3);
  for (std::size_t i = first; i < last; ++i) {
    std::copy(inputs.row(i).begin(), inputs.row(i).end(), out.inputs.row(i - first).begin());
    std::copy(targets.row(i).begin(), targets.row(i).end(), out.targets.row(i - first).begin());
    out.masks.push_back(masks[i]);
  }
  return out;
}

void Batch::push_back(std::span<const double> input, const std::array<double, 3>& target,
                      const Mask& mask) {
  if (!inputs.empty() && input.size() != inputs.cols()) {
    throw ValidationError("batch input width mismatch");
  }
  inputs.append_row(input);
  targets.append_row(std::span<const double>(target));
  masks.push_back(mask);
}

MatrixD forward(const ScoringHead& head, const MatrixD& inputs) {
  if (inputs.rows() > 0 && inputs.cols() != head.input_width()) {
    throw ValidationError("forward: input width " + std::to_string(inputs.cols()) +
                          " != head input width " + std::to_string(head.input_width()));
  }
  kernels::ForwardCache cache;
  kernels::parallel::forward(head, inputs, cache);
  return std::move(cache.output);
}

double loss(const MatrixD& predicted, const MatrixD& targets, std::span<const Mask> masks) {
  if (predicted.rows() != targets.rows() || predicted.rows() != masks.size() ||
      predicted.cols() != 3 || targets.cols() != 3) {
    throw ValidationError("loss: shape mismatch");
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < predicted.rows(); ++i) {
    for (std::size_t d = 0; d < 3; ++d) {
      if (!masks[i][d]) continue;
      const double e = predicted(i, d) - targets(i, d);
      sum += e * e;
      ++n;
    }
  }
  if (n == 0) throw UndefinedStatistic("loss undefined: every target cell is masked");
  return sum / static_cast<double>(n);
}

}  // namespace dsr::scorer

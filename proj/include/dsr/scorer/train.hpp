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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsr/core/jsonl.hpp"
#include "dsr/core/types.hpp"
#include "dsr/scorer/config.hpp"
#include "dsr/scorer/embedding.hpp"
#include "dsr/scorer/head.hpp"
#include "dsr/scorer/kernels.hpp"

namespace dsr::scorer {

struct LossHistory {
  std::vector<double> epoch_loss;  // masked MSE over each epoch
  std::vector<double> smoothed;    // running minimum of epoch_loss
};

struct TrainResult {
  ScoringHead head;
  LossHistory history;
};

// Full-batch (or mini-batch, per config.batch_size) Adam on the masked MSE.
// Batches are taken in dataset order; members of each batch are reduced in
// a canonical content order, so permuting spans within a batch does not
// change the result. Throws NumericError naming the epoch if the loss
// becomes non-finite.
TrainResult train(const Batch& dataset, const ScorerConfig& config);
TrainResult train(const Batch& dataset, const ScorerConfig& config, ScoringHead initial);

// Analytic gradient of the masked MSE for one batch.
kernels::Gradients loss_gradient(const ScoringHead& head, const Batch& batch);

using GradientFn = std::function<kernels::Gradients(const ScoringHead&, const Batch&)>;

// Largest |g_a - g_n| / max(|g_a|, |g_n|, 1e-8) over every parameter, where
// g_n is the central finite difference with step `epsilon` (evaluated in
// extended precision). Throws ValidationError unless 0 < epsilon <= 1e-2.
double grad_check(const ScoringHead& head, const Batch& batch, double epsilon);
double grad_check(const ScoringHead& head, const Batch& batch, double epsilon,
                  const GradientFn& analytic);

struct DimensionScore {
  std::size_t n = 0;
  std::optional<double> rmse;  // absent when n == 0
  std::optional<double> r2;    // absent when the targets have zero variance
};

// RMSE and R^2 over unmasked cells, per dimension.
std::array<DimensionScore, 3> evaluate_scores(const ScoringHead& head, const Batch& dataset);

jsonl::OrderedJson scores_to_json(const std::array<DimensionScore, 3>& scores);
std::string scores_table(const std::array<DimensionScore, 3>& scores,
                         const std::string& row_label = "model");

// Pairs every scored span of the corpus with the embeddings of its text.
struct LabeledDataset {
  Batch batch;
  std::vector<SpanKey> keys;
};

// Throws ValidationError when a text has no embeddings, exceeds span_max
// spans, or its embeddings do not tile it.
LabeledDataset build_dataset(const Corpus& labels, const std::vector<EmbeddedText>& embeddings,
                             const ScorerConfig& config);

// Scores every span of `corpus` with the head; provenance becomes Model.
Corpus score_corpus(const ScoringHead& head, const Corpus& corpus,
                    const std::vector<EmbeddedText>& embeddings, const ScorerConfig& config);

// Checkpoint: {"config":{...},"w1":[...],"b1":[...],"w2":[...],"b2":[...]}
// with row-major flattened weights.
std::string checkpoint_json(const ScoringHead& head, const ScorerConfig& config);
void save_checkpoint(const ScoringHead& head, const ScorerConfig& config,
                     const std::filesystem::path& path);
std::pair<ScoringHead, ScorerConfig> load_checkpoint(const std::filesystem::path& path);
std::pair<ScoringHead, ScorerConfig> parse_checkpoint(const std::string& text);

}  // namespace dsr::scorer

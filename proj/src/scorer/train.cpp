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

#include "dsr/scorer/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "dsr/util/error.hpp"

namespace dsr::scorer {
namespace {

// Orders batch members by content alone: pooled input, then targets with
// masked cells read as zero, then mask. Masked target values never affect
// the order.
Batch canonical_order(const Batch& batch) {
  std::vector<std::size_t> idx(batch.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto target = [&](std::size_t i, std::size_t d) {
    return batch.masks[i][d] ? batch.targets(i, d) : 0.0;
  };
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = batch.inputs.row(a);
    const auto rb = batch.inputs.row(b);
    if (!std::equal(ra.begin(), ra.end(), rb.begin())) {
      return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    }
    for (std::size_t d = 0; d < 3; ++d) {
      if (target(a, d) != target(b, d)) return target(a, d) < target(b, d);
    }
    return batch.masks[a] < batch.masks[b];
  });
  Batch out;
  out.inputs = MatrixD(batch.size(), batch.inputs.cols());
  out.targets = MatrixD(batch.size(), 3);
  out.masks.reserve(batch.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const auto src = batch.inputs.row(idx[r]);
    std::copy(src.begin(), src.end(), out.inputs.row(r).begin());
    for (std::size_t d = 0; d < 3; ++d) out.targets(r, d) = target(idx[r], d);
    out.masks.push_back(batch.masks[idx[r]]);
  }
  return out;
}

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;
};

void adam_update(std::vector<double>& params, const std::vector<double>& grads, double* m,
                 double* v, const ScorerConfig& cfg, double bc1, double bc2) {
  const std::size_t n = params.size();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double g = grads[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    params[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
  }
}

void adam_step(ScoringHead& head, const kernels::Gradients& g, AdamState& state,
               const ScorerConfig& cfg) {
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  std::size_t offset = 0;
  auto apply = [&](std::vector<double>& params, const std::vector<double>& grads) {
    adam_update(params, grads, state.m.data() + offset, state.v.data() + offset, cfg, bc1, bc2);
    offset += params.size();
  };
  apply(head.w1.data(), g.w1.data());
  apply(head.b1, g.b1);
  apply(head.w2.data(), g.w2.data());
  apply(head.b2, g.b2);
}

}  // namespace

kernels::Gradients loss_gradient(const ScoringHead& head, const Batch& batch) {
  kernels::ForwardCache cache;
  kernels::parallel::forward(head, batch.inputs, cache);
  const MatrixD d_out =
      kernels::output_gradient(cache.output, batch.targets, batch.masks, batch.unmasked_count());
  kernels::Gradients grads;
  kernels::parallel::backward(head, batch.inputs, cache, d_out, grads);
  return grads;
}

TrainResult train(const Batch& dataset, const ScorerConfig& config) {
  config.validate();
  return train(dataset, config,
               ScoringHead::initialize(dataset.inputs.cols(), config.hidden, config.seed));
}

TrainResult train(const Batch& dataset, const ScorerConfig& config, ScoringHead initial) {
  config.validate();
  if (dataset.size() == 0) throw ValidationError("train: empty dataset");
  if (dataset.inputs.cols() != initial.input_width()) {
    throw ValidationError("train: dataset width " + std::to_string(dataset.inputs.cols()) +
                          " != head input width " + std::to_string(initial.input_width()));
  }
  initial.validate();

  std::vector<Batch> batches;
  for (std::size_t first = 0; first < dataset.size(); first += config.batch_size) {
    const std::size_t last = std::min(dataset.size(), first + config.batch_size);
    batches.push_back(canonical_order(dataset.slice(first, last)));
    if (batches.back().unmasked_count() == 0) {
      throw ValidationError("train: batch starting at span " + std::to_string(first) +
                            " has no unmasked targets");
    }
  }

  TrainResult result;
  result.head = std::move(initial);
  AdamState adam;
  adam.m.assign(result.head.parameter_count(), 0.0);
  adam.v.assign(result.head.parameter_count(), 0.0);

  kernels::ForwardCache cache;
  kernels::Gradients grads;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double sum_sq = 0.0;
    std::size_t cells = 0;
    try {
      for (const auto& batch : batches) {
        kernels::parallel::forward(result.head, batch.inputs, cache);
        const std::size_t n = batch.unmasked_count();
        sum_sq += loss(cache.output, batch.targets, batch.masks) * static_cast<double>(n);
        cells += n;
        const MatrixD d_out = kernels::output_gradient(cache.output, batch.targets, batch.masks, n);
        kernels::parallel::backward(result.head, batch.inputs, cache, d_out, grads);
        adam_step(result.head, grads, adam, config);
      }
    } catch (const NumericError&) {
      throw NumericError("training diverged at epoch " + std::to_string(epoch + 1));
    }
    const double epoch_loss = sum_sq / static_cast<double>(cells);
    if (!std::isfinite(epoch_loss)) {
      throw NumericError("training diverged at epoch " + std::to_string(epoch + 1));
    }
    result.history.epoch_loss.push_back(epoch_loss);
    const double best = result.history.smoothed.empty()
                            ? epoch_loss
                            : std::min(result.history.smoothed.back(), epoch_loss);
    result.history.smoothed.push_back(best);
  }
  return result;
}

namespace {

// Masked MSE in extended precision with parameter `index` replaced by
// `value`. Independent of the production kernels.
long double extended_loss(const ScoringHead& head, const Batch& batch, std::size_t index,
                          long double value) {
  const std::size_t hidden = head.hidden_width();
  const std::size_t width = head.input_width();
  auto param = [&](std::size_t i) -> long double {
    return i == index ? value : static_cast<long double>(head.parameter(i));
  };
  const std::size_t off_b1 = hidden * width;
  const std::size_t off_w2 = off_b1 + hidden;
  const std::size_t off_b2 = off_w2 + 3 * hidden;

  long double sum = 0.0L;
  std::size_t n = 0;
  std::vector<long double> a(hidden);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (std::size_t j = 0; j < hidden; ++j) {
      long double z = param(off_b1 + j);
      for (std::size_t k = 0; k < width; ++k) {
        z += param(j * width + k) * static_cast<long double>(batch.inputs(i, k));
      }
      a[j] = std::tanh(z);
    }
    for (std::size_t o = 0; o < 3; ++o) {
      if (!batch.masks[i][o]) continue;
      long double z = param(off_b2 + o);
      for (std::size_t j = 0; j < hidden; ++j) z += param(off_w2 + o * hidden + j) * a[j];
      const long double e = std::tanh(z) - static_cast<long double>(batch.targets(i, o));
      sum += e * e;
      ++n;
    }
  }
  if (n == 0) throw UndefinedStatistic("loss undefined: every target cell is masked");
  return sum / static_cast<long double>(n);
}

}  // namespace

double grad_check(const ScoringHead& head, const Batch& batch, double epsilon) {
  return grad_check(head, batch, epsilon, &loss_gradient);
}

double grad_check(const ScoringHead& head, const Batch& batch, double epsilon,
                  const GradientFn& analytic) {
  if (!(epsilon > 0.0 && epsilon <= 1e-2)) {
    throw ValidationError("grad_check: epsilon must be in (0, 1e-2]");
  }
  const kernels::Gradients g = analytic(head, batch);
  if (g.size() != head.parameter_count()) throw ValidationError("grad_check: gradient shape mismatch");
  double worst = 0.0;
  const long double eps = epsilon;
  for (std::size_t i = 0; i < head.parameter_count(); ++i) {
    const long double theta = head.parameter(i);
    const long double up = extended_loss(head, batch, i, theta + eps);
    const long double down = extended_loss(head, batch, i, theta - eps);
    const double numeric = static_cast<double>((up - down) / (2.0L * eps));
    const double ga = g.parameter(i);
    const double denom = std::max({std::abs(ga), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(ga - numeric) / denom);
  }
  return worst;
}

std::array<DimensionScore, 3> evaluate_scores(const ScoringHead& head, const Batch& dataset) {
  const MatrixD predicted = forward(head, dataset.inputs);
  std::array<DimensionScore, 3> out;
  for (std::size_t d = 0; d < 3; ++d) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (!dataset.masks[i][d]) continue;
      sum += dataset.targets(i, d);
      ++n;
    }
    out[d].n = n;
    if (n == 0) continue;
    const double mean = sum / static_cast<double>(n);
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (!dataset.masks[i][d]) continue;
      const double e = dataset.targets(i, d) - predicted(i, d);
      const double t = dataset.targets(i, d) - mean;
      ss_res += e * e;
      ss_tot += t * t;
    }
    out[d].rmse = std::sqrt(ss_res / static_cast<double>(n));
    if (ss_tot > 0.0) out[d].r2 = 1.0 - ss_res / ss_tot;
  }
  return out;
}

jsonl::OrderedJson scores_to_json(const std::array<DimensionScore, 3>& scores) {
  jsonl::OrderedJson j;
  for (Dimension d : kAllDimensions) {
    const auto& s = scores[static_cast<std::size_t>(d)];
    jsonl::OrderedJson e;
    e["n"] = s.n;
    e["rmse"] = s.rmse ? jsonl::OrderedJson(*s.rmse) : jsonl::OrderedJson(nullptr);
    e["r2"] = s.r2 ? jsonl::OrderedJson(*s.r2) : jsonl::OrderedJson(nullptr);
    j[std::string(to_string(d))] = std::move(e);
  }
  return j;
}

std::string scores_table(const std::array<DimensionScore, 3>& scores, const std::string& row_label) {
  std::ostringstream os;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-16s| %-18s| %-18s| %-18s\n", "", "Opposed-Advocated",
                "Victimized-Aided", "Harmful-Helpful");
  os << buf;
  std::snprintf(buf, sizeof buf, "%-16s| %-8s %-8s | %-8s %-8s | %-8s %-8s\n", "", "RMSE", "R^2",
                "RMSE", "R^2", "RMSE", "R^2");
  os << buf;
  auto fmt = [](const std::optional<double>& v) {
    char c[16];
    if (v) {
      std::snprintf(c, sizeof c, "%.3f", *v);
    } else {
      std::snprintf(c, sizeof c, "n/a");
    }
    return std::string(c);
  };
  std::snprintf(buf, sizeof buf, "%-16s| %-8s %-8s | %-8s %-8s | %-8s %-8s\n", row_label.c_str(),
                fmt(scores[0].rmse).c_str(), fmt(scores[0].r2).c_str(), fmt(scores[1].rmse).c_str(),
                fmt(scores[1].r2).c_str(), fmt(scores[2].rmse).c_str(), fmt(scores[2].r2).c_str());
  os << buf;
  return os.str();
}

namespace {

struct Pooled {
  MatrixD inputs;
  std::vector<const ScoredSpan*> spans;
};

Pooled pool_corpus(const Corpus& corpus, const std::vector<EmbeddedText>& embeddings,
                   const ScorerConfig& config) {
  std::unordered_map<std::string_view, std::size_t> by_id;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    validate_embedded(embeddings[i], config.h);
    by_id.emplace(embeddings[i].text_id, i);
  }
  std::unordered_map<std::string_view, std::vector<const ScoredSpan*>> spans_by_text;
  for (const auto& s : corpus.spans) spans_by_text[s.span.text_id].push_back(&s);

  Pooled out;
  std::vector<kernels::SpanRef> refs;
  for (const auto& text : corpus.texts) {
    auto it = spans_by_text.find(text.id);
    if (it == spans_by_text.end()) continue;
    if (it->second.size() > config.span_max) {
      throw ValidationError("text '" + text.id + "' has " + std::to_string(it->second.size()) +
                            " spans, exceeding span_max " + std::to_string(config.span_max));
    }
    auto emb = by_id.find(text.id);
    if (emb == by_id.end()) throw ValidationError("no embeddings for text '" + text.id + "'");
    const EmbeddedText& e = embeddings[emb->second];
    if (e.tokens.size() > config.text_max) {
      throw ValidationError("text '" + text.id + "' exceeds text_max tokens");
    }
    check_tiling(e, text);
    for (const ScoredSpan* s : it->second) {
      refs.push_back({emb->second, s->span.start, s->span.end});
      out.spans.push_back(s);
    }
  }
  out.inputs = kernels::parallel::pool(embeddings, refs);
  return out;
}

}  // namespace

LabeledDataset build_dataset(const Corpus& labels, const std::vector<EmbeddedText>& embeddings,
                             const ScorerConfig& config) {
  Pooled pooled = pool_corpus(labels, embeddings, config);
  LabeledDataset out;
  out.batch.inputs = std::move(pooled.inputs);
  out.batch.targets = MatrixD(pooled.spans.size(), 3);
  for (std::size_t i = 0; i < pooled.spans.size(); ++i) {
    const auto& r = pooled.spans[i]->regard;
    for (std::size_t d = 0; d < 3; ++d) out.batch.targets(i, d) = r.scores()[d];
    out.batch.masks.push_back(r.mask());
    out.keys.push_back(SpanKey::of(pooled.spans[i]->span));
  }
  return out;
}

Corpus score_corpus(const ScoringHead& head, const Corpus& corpus,
                    const std::vector<EmbeddedText>& embeddings, const ScorerConfig& config) {
  Pooled pooled = pool_corpus(corpus, embeddings, config);
  const MatrixD predicted = forward(head, pooled.inputs);
  Corpus out;
  out.name = corpus.name;
  out.texts = corpus.texts;
  for (std::size_t i = 0; i < pooled.spans.size(); ++i) {
    ScoredSpan s;
    s.span = pooled.spans[i]->span;
    s.regard = RegardVector::make(s.span.kind, predicted(i, 0), predicted(i, 1), predicted(i, 2));
    s.provenance = Provenance::Model;
    out.spans.push_back(std::move(s));
  }
  return out;
}

std::string checkpoint_json(const ScoringHead& head, const ScorerConfig& config) {
  jsonl::OrderedJson j;
  j["format"] = "dsr-scoring-head/1";
  j["config"] = config_to_json(config);
  j["input"] = head.input_width();
  j["hidden"] = head.hidden_width();
  j["w1"] = head.w1.data();
  j["b1"] = head.b1;
  j["w2"] = head.w2.data();
  j["b2"] = head.b2;
  return j.dump() + "\n";
}

void save_checkpoint(const ScoringHead& head, const ScorerConfig& config,
                     const std::filesystem::path& path) {
  jsonl::write_file(path, checkpoint_json(head, config));
}

std::pair<ScoringHead, ScorerConfig> parse_checkpoint(const std::string& text) {
  jsonl::Json j;
  try {
    j = jsonl::Json::parse(text);
    const ScorerConfig config = config_from_json(j.at("config"));
    const auto input = j.at("input").get<std::size_t>();
    const auto hidden = j.at("hidden").get<std::size_t>();
    ScoringHead head = ScoringHead::zeros(input, hidden);
    auto fill = [&](const char* key, std::vector<double>& dst) {
      const auto v = j.at(key).get<std::vector<double>>();
      if (v.size() != dst.size()) {
        throw ValidationError(std::string("checkpoint: array '") + key + "' has wrong length");
      }
      dst = v;
    };
    fill("w1", head.w1.data());
    fill("b1", head.b1);
    fill("w2", head.w2.data());
    fill("b2", head.b2);
    head.validate();
    return {std::move(head), config};
  } catch (const jsonl::Json::exception& e) {
    throw ValidationError(std::string("malformed checkpoint: ") + e.what());
  }
}

std::pair<ScoringHead, ScorerConfig> load_checkpoint(const std::filesystem::path& path) {
  return parse_checkpoint(jsonl::read_file(path));
}

}  // namespace dsr::scorer

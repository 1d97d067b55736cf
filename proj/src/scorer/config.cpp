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

#include "dsr/scorer/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "dsr/core/jsonl.hpp"
#include "dsr/util/error.hpp"
#include "dsr/util/key_values.hpp"

namespace dsr::scorer {

void ScorerConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ValidationError(std::string("config: ") + name + " must be positive");
  };
  positive(h, "h");
  positive(text_max, "text_max");
  positive(span_max, "span_max");
  positive(hidden, "hidden");
  positive(epochs, "epochs");
  positive(batch_size, "batch_size");
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw ValidationError("config: lr must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ValidationError("config: beta1 must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ValidationError("config: beta2 must be in [0, 1)");
  if (!(eps > 0.0)) throw ValidationError("config: eps must be positive");
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw ValidationError("config: bad value '" + value + "' for " + key);
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

void apply_config_value(ScorerConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "h") cfg.h = parse_number<std::size_t>(key, value);
  else if (key == "text_max") cfg.text_max = parse_number<std::size_t>(key, value);
  else if (key == "span_max") cfg.span_max = parse_number<std::size_t>(key, value);
  else if (key == "hidden") cfg.hidden = parse_number<std::size_t>(key, value);
  else if (key == "lr") cfg.lr = parse_number<double>(key, value);
  else if (key == "beta1") cfg.beta1 = parse_number<double>(key, value);
  else if (key == "beta2") cfg.beta2 = parse_number<double>(key, value);
  else if (key == "eps") cfg.eps = parse_number<double>(key, value);
  else if (key == "epochs") cfg.epochs = parse_number<std::size_t>(key, value);
  else if (key == "batch_size") cfg.batch_size = parse_number<std::size_t>(key, value);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else throw ValidationError("config: unknown key '" + key + "'");
}

ScorerConfig parse_config(const std::string& text, ScorerConfig base) {
  for (const auto& [k, v] : util::parse_key_values(text, "config")) apply_config_value(base, k, v);
  base.validate();
  return base;
}

ScorerConfig load_config(const std::filesystem::path& path, ScorerConfig base) {
  for (const auto& [k, v] : util::parse_key_values(jsonl::read_file(path), path.string())) {
    apply_config_value(base, k, v);
  }
  base.validate();
  return base;
}

std::string format_config(const ScorerConfig& cfg) {
  std::ostringstream os;
  os << "h=" << cfg.h << '\n'
     << "text_max=" << cfg.text_max << '\n'
     << "span_max=" << cfg.span_max << '\n'
     << "hidden=" << cfg.hidden << '\n'
     << "lr=" << format_double(cfg.lr) << '\n'
     << "beta1=" << format_double(cfg.beta1) << '\n'
     << "beta2=" << format_double(cfg.beta2) << '\n'
     << "eps=" << format_double(cfg.eps) << '\n'
     << "epochs=" << cfg.epochs << '\n'
     << "batch_size=" << cfg.batch_size << '\n'
     << "seed=" << cfg.seed << '\n';
  return os.str();
}

jsonl::OrderedJson config_to_json(const ScorerConfig& cfg) {
  jsonl::OrderedJson j;
  j["h"] = cfg.h;
  j["text_max"] = cfg.text_max;
  j["span_max"] = cfg.span_max;
  j["hidden"] = cfg.hidden;
  j["lr"] = cfg.lr;
  j["beta1"] = cfg.beta1;
  j["beta2"] = cfg.beta2;
  j["eps"] = cfg.eps;
  j["epochs"] = cfg.epochs;
  j["batch_size"] = cfg.batch_size;
  j["seed"] = cfg.seed;
  return j;
}

ScorerConfig config_from_json(const jsonl::Json& j) {
  ScorerConfig cfg;
  cfg.h = j.at("h").get<std::size_t>();
  cfg.text_max = j.at("text_max").get<std::size_t>();
  cfg.span_max = j.at("span_max").get<std::size_t>();
  cfg.hidden = j.at("hidden").get<std::size_t>();
  cfg.lr = j.at("lr").get<double>();
  cfg.beta1 = j.at("beta1").get<double>();
  cfg.beta2 = j.at("beta2").get<double>();
  cfg.eps = j.at("eps").get<double>();
  cfg.epochs = j.at("epochs").get<std::size_t>();
  cfg.batch_size = j.at("batch_size").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.validate();
  return cfg;
}

}  // namespace dsr::scorer

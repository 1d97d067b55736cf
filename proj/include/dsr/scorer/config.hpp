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

#include <cstdint>
#include <filesystem>
#include <string>

#include "dsr/core/jsonl.hpp"

namespace dsr::scorer {

struct ScorerConfig {
  std::size_t h = 1024;         // embedding width
  std::size_t text_max = 512;   // tokens per text
  std::size_t span_max = 200;   // spans per text
  std::size_t hidden = 256;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::size_t epochs = 20;
  std::size_t batch_size = 1024;  // spans per optimizer step
  std::uint64_t seed = 7;

  // Throws ValidationError if any field is non-positive (lr may be 0) or
  // beta1/beta2 fall outside [0, 1).
  void validate() const;

  friend bool operator==(const ScorerConfig&, const ScorerConfig&) = default;
};

// Flat key=value text, '#' comments. Unknown keys are an error.
ScorerConfig parse_config(const std::string& text, ScorerConfig base = {});
ScorerConfig load_config(const std::filesystem::path& path, ScorerConfig base = {});
void apply_config_value(ScorerConfig& cfg, const std::string& key, const std::string& value);
std::string format_config(const ScorerConfig& cfg);

jsonl::OrderedJson config_to_json(const ScorerConfig& cfg);
ScorerConfig config_from_json(const jsonl::Json& j);

}  // namespace dsr::scorer

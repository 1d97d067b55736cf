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

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "dsr/core/jsonl.hpp"

namespace dsr::cli {

// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

// Record of one CLI run, written as "<primary output>.manifest.json".
class RunManifest {
 public:
  explicit RunManifest(std::string subcommand);

  void config(const std::string& key, jsonl::OrderedJson value);
  void input(const std::filesystem::path& path);
  void output(const std::filesystem::path& path);

  jsonl::OrderedJson to_json() const;
  // Writes beside `primary`; returns the manifest path.
  std::filesystem::path write(const std::filesystem::path& primary) const;

  static std::filesystem::path path_for(const std::filesystem::path& primary);

 private:
  std::string subcommand_;
  jsonl::OrderedJson config_ = jsonl::OrderedJson::object();
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace dsr::cli

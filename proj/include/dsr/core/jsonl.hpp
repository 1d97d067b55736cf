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

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include <json.hpp>

namespace dsr::jsonl {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Calls fn(object, line_number) for every non-blank line. JSON syntax errors
// and any dsr::Error/json exception thrown by fn are rethrown as ParseError
// carrying `label` and the 1-based line number.
void for_each_line(std::istream& in, const std::string& label,
                   const std::function<void(const Json&, std::size_t)>& fn);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

// Whole-file helpers.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace dsr::jsonl

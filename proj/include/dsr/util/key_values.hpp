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

#include <map>
#include <string>

namespace dsr::util {

// Flat "key = value" lines; '#' starts a comment, blank lines are skipped.
// Throws ParseError on a line without '=' or a repeated key.
std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& label);

}  // namespace dsr::util

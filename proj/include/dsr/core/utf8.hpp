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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Offsets throughout the workbench count Unicode scalar values, not bytes.
namespace dsr::utf8 {

// Throws ValidationError on malformed UTF-8 (overlongs, surrogates, truncation).
std::u32string decode(std::string_view bytes);
std::string encode(std::u32string_view scalars);
void append(std::string& out, char32_t cp);

std::size_t length(std::string_view bytes);

// Byte offset of every scalar boundary; result has length(bytes) + 1 entries.
std::vector<std::size_t> boundaries(std::string_view bytes);

// Substring [start, end) in scalar values.
std::string slice(std::string_view bytes, std::size_t start, std::size_t end);

// ASCII-only case folding; non-ASCII bytes pass through untouched.
std::string ascii_lower(std::string_view s);

}  // namespace dsr::utf8

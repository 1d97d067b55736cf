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

#include "dsr/core/utf8.hpp"

#include "dsr/util/error.hpp"

namespace dsr::utf8 {
namespace {

// Decodes one scalar starting at bytes[i]; advances i.
char32_t decode_one(std::string_view bytes, std::size_t& i) {
  const auto lead = static_cast<unsigned char>(bytes[i]);
  std::size_t extra = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if (lead < 0x80) {
    ++i;
    return lead;
  } else if ((lead & 0xe0) == 0xc0) {
    extra = 1;
    cp = lead & 0x1f;
    min = 0x80;
  } else if ((lead & 0xf0) == 0xe0) {
    extra = 2;
    cp = lead & 0x0f;
    min = 0x800;
  } else if ((lead & 0xf8) == 0xf0) {
    extra = 3;
    cp = lead & 0x07;
    min = 0x10000;
  } else {
    throw ValidationError("invalid UTF-8 lead byte at offset " + std::to_string(i));
  }
  if (i + extra >= bytes.size()) {
    throw ValidationError("truncated UTF-8 sequence at offset " + std::to_string(i));
  }
  for (std::size_t k = 1; k <= extra; ++k) {
    const auto cont = static_cast<unsigned char>(bytes[i + k]);
    if ((cont & 0xc0) != 0x80) {
      throw ValidationError("invalid UTF-8 continuation at offset " + std::to_string(i + k));
    }
    cp = (cp << 6) | (cont & 0x3f);
  }
  if (cp < min || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) {
    throw ValidationError("invalid UTF-8 scalar at offset " + std::to_string(i));
  }
  i += extra + 1;
  return cp;
}

}  // namespace

std::u32string decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) out.push_back(decode_one(bytes, i));
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

std::string encode(std::u32string_view scalars) {
  std::string out;
  out.reserve(scalars.size());
  for (char32_t cp : scalars) append(out, cp);
  return out;
}

std::size_t length(std::string_view bytes) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < bytes.size()) {
    decode_one(bytes, i);
    ++n;
  }
  return n;
}

std::vector<std::size_t> boundaries(std::string_view bytes) {
  std::vector<std::size_t> out;
  out.reserve(bytes.size() + 1);
  std::size_t i = 0;
  while (i < bytes.size()) {
    out.push_back(i);
    decode_one(bytes, i);
  }
  out.push_back(bytes.size());
  return out;
}

std::string slice(std::string_view bytes, std::size_t start, std::size_t end) {
  const auto b = boundaries(bytes);
  if (start > end || end >= b.size()) {
    throw ValidationError("slice [" + std::to_string(start) + "," + std::to_string(end) +
                          ") out of range for text of length " + std::to_string(b.size() - 1));
  }
  return std::string(bytes.substr(b[start], b[end] - b[start]));
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace dsr::utf8

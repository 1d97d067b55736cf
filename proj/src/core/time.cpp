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

#include "dsr/util/time.hpp"

#include <charconv>
#include <cstdio>

#include "dsr/util/error.hpp"

namespace dsr::util {

using namespace std::chrono;

std::string format_utc(Timestamp ts) {
  const auto day = floor<days>(ts);
  const year_month_day ymd{day};
  const auto tod = ts - day;
  const auto h = duration_cast<hours>(tod);
  const auto m = duration_cast<minutes>(tod - h);
  const auto s = duration_cast<seconds>(tod - h - m);
  const auto ms = duration_cast<milliseconds>(tod - h - m - s);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(h.count()), int(m.count()),
                int(s.count()), int(ms.count()));
  return buf;
}

namespace {

int take(std::string_view s, std::size_t pos, std::size_t len) {
  int v = 0;
  if (pos + len > s.size()) throw ValidationError("truncated timestamp '" + std::string(s) + "'");
  auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
  if (ec != std::errc() || p != s.data() + pos + len) {
    throw ValidationError("malformed timestamp '" + std::string(s) + "'");
  }
  return v;
}

void expect(std::string_view s, std::size_t pos, char c) {
  if (pos >= s.size() || s[pos] != c) {
    throw ValidationError("malformed timestamp '" + std::string(s) + "'");
  }
}

}  // namespace

Timestamp parse_utc(std::string_view s) {
  const int y = take(s, 0, 4);
  expect(s, 4, '-');
  const int mo = take(s, 5, 2);
  expect(s, 7, '-');
  const int d = take(s, 8, 2);
  expect(s, 10, 'T');
  const int hh = take(s, 11, 2);
  expect(s, 13, ':');
  const int mm = take(s, 14, 2);
  expect(s, 16, ':');
  const int ss = take(s, 17, 2);
  std::size_t pos = 19;
  int millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    std::size_t digits = 0;
    ++pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      if (digits < 3) millis = millis * 10 + (s[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) throw ValidationError("malformed timestamp '" + std::string(s) + "'");
    for (; digits < 3; ++digits) millis *= 10;
  }
  expect(s, pos, 'Z');
  if (pos + 1 != s.size()) throw ValidationError("trailing characters in timestamp '" + std::string(s) + "'");
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) {
    throw ValidationError("timestamp out of range '" + std::string(s) + "'");
  }
  return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{millis};
}

Timestamp now_utc() { return time_point_cast<milliseconds>(system_clock::now()); }

}  // namespace dsr::util

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

#include <stdexcept>
#include <string>

namespace dsr {

// Base for every error raised by the workbench. The CLI maps these to exit
// code 1; anything else escaping a subcommand is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented invariant (bad offsets, out-of-range score...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; carries the 1-based line number.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : ValidationError(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A span does not start and end on token boundaries.
class AlignmentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A statistic is undefined for the given input (no pairable units, zero
// margins, degenerate samples).
class UndefinedStatistic : public Error {
 public:
  using Error::Error;
};

// NaN/inf appeared during a numeric computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsr

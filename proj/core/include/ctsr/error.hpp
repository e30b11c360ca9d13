// Copyright 2026 The CTSR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTSR_ERROR_HPP_
#define CTSR_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ctsr {

// Shape or dimension disagreement between operands. `axis` names the
// offending axis ("rows", "channels", ...).
class ShapeError : public std::invalid_argument {
 public:
  ShapeError(std::string op, std::string axis, const std::string& detail)
      : std::invalid_argument(op + ": " + axis + ": " + detail),
        op_(std::move(op)),
        axis_(std::move(axis)) {}

  const std::string& op() const { return op_; }
  const std::string& axis() const { return axis_; }

 private:
  std::string op_;
  std::string axis_;
};

// Malformed input file. `line` is 1-based, 0 when not line specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, std::size_t line, const std::string& detail)
      : std::runtime_error(path + (line ? ":" + std::to_string(line) : "") +
                           ": " + detail),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

// Activation or loss became NaN/Inf.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctsr

#endif  // CTSR_ERROR_HPP_

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

#include "options.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "ctsr/binary_io.hpp"
#include "ctsr/error.hpp"

namespace ctsr::cli {
namespace {

std::vector<std::string_view> SplitComma(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(',', start);
    std::string_view part = text.substr(start, end - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    parts.push_back(part);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

template <typename T>
std::optional<T> ParseNumber(std::string_view s) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::size_t ParseK(std::string_view s, std::string_view whole) {
  const auto k = ParseNumber<std::size_t>(s);
  if (!k || *k == 0) {
    throw std::invalid_argument(fmt::format("invalid k list '{}'", whole));
  }
  return *k;
}

}  // namespace

std::vector<std::size_t> ParseKs(std::string_view text) {
  std::vector<std::size_t> ks;
  for (std::string_view part : SplitComma(text)) {
    const std::size_t dash = part.find('-');
    if (dash == std::string_view::npos) {
      ks.push_back(ParseK(part, text));
      continue;
    }
    const std::size_t lo = ParseK(part.substr(0, dash), text);
    const std::size_t hi = ParseK(part.substr(dash + 1), text);
    if (hi < lo) throw std::invalid_argument(fmt::format("invalid k range '{}'", part));
    for (std::size_t k = lo; k <= hi; ++k) ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

SplitRatios ParseRatios(std::string_view text) {
  const auto parts = SplitComma(text);
  std::vector<double> r;
  for (std::string_view p : parts) {
    const auto v = ParseNumber<double>(p);
    if (!v || !(*v >= 0.0)) break;
    r.push_back(*v);
  }
  if (r.size() != 3 || parts.size() != 3 || std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw std::invalid_argument(fmt::format(
        "invalid split ratios '{}': expected three non-negative fractions "
        "summing to 1",
        text));
  }
  return {r[0], r[1], r[2]};
}

std::optional<Split> ParseSplitOrAll(std::string_view text) {
  if (text == "all") return std::nullopt;
  if (const auto split = ParseSplit(text)) return split;
  throw std::invalid_argument(
      fmt::format("invalid split '{}': expected train, val, test or all", text));
}

std::vector<std::string> ParseMethodList(std::string_view text) {
  std::vector<std::string> methods;
  for (std::string_view part : SplitComma(text)) {
    if (part.empty()) continue;
    if (std::find(methods.begin(), methods.end(), part) == methods.end()) {
      methods.emplace_back(part);
    }
  }
  return methods;
}

unsigned ResolveThreads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CTSR_THREADS")) {
    if (const auto n = ParseNumber<unsigned>(env); n && *n > 0) return *n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> ReadSingleColumn(const std::filesystem::path& path) {
  const std::string text = io::ReadFile(path);
  std::vector<double> values;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    ++line_no;
    start = end + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      line.remove_prefix(1);
    }
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '+') line.remove_prefix(1);
    const auto v = ParseNumber<double>(line);
    if (!v || !std::isfinite(*v)) {
      throw ParseError(path.string(), line_no, "expected one finite value per line");
    }
    values.push_back(*v);
  }
  if (values.size() < 2) {
    throw ParseError(path.string(), line_no, "query needs at least 2 values");
  }
  return values;
}

}  // namespace ctsr::cli

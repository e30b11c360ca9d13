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

#include "ctsr/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "ctsr/binary_io.hpp"
#include "ctsr/error.hpp"

namespace ctsr {

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  char sep = 0;
  if (line.find('\t') != std::string_view::npos) {
    sep = '\t';
  } else if (line.find(',') != std::string_view::npos) {
    sep = ',';
  }
  if (sep) {
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(sep, start);
      fields.push_back(Trim(line.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  } else {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) fields.push_back(line.substr(start, i - start));
    }
  }
  return fields;
}

bool IsMissing(std::string_view field) {
  if (field.empty()) return true;
  std::string lower(field);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return lower == "nan" || lower == "?";
}

}  // namespace

UcrParseResult ParseUcrText(std::string_view text, const std::string& source) {
  UcrParseResult result;
  std::size_t expected_fields = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto fields = SplitFields(line);
    if (expected_fields == 0) {
      expected_fields = fields.size();
    } else if (fields.size() != expected_fields) {
      throw ParseError(source, line_no,
                       fmt::format("expected {} fields, found {}", expected_fields,
                                   fields.size()));
    }
    RawSeries s;
    s.class_label = std::string(fields[0]);
    if (s.class_label.empty()) throw ParseError(source, line_no, "empty class label");
    for (std::size_t f = 1; f < fields.size(); ++f) {
      if (IsMissing(fields[f])) continue;
      double v = 0.0;
      const auto* first = fields[f].data();
      const auto* last = first + fields[f].size();
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) {
        throw ParseError(source, line_no,
                         fmt::format("field {} is not a number: '{}'", f + 1,
                                     fields[f]));
      }
      if (!std::isfinite(v)) continue;
      s.values.push_back(v);
    }
    if (s.values.size() < 2) {
      result.rejected_lines.push_back(line_no);
      continue;
    }
    result.series.push_back(std::move(s));
  }
  return result;
}

UcrParseResult ParseUcrFile(const std::filesystem::path& path) {
  return ParseUcrText(io::ReadFile(path), path.string());
}

std::string SerializeUcr(std::span<const RawSeries> series, char separator) {
  std::string out;
  for (const RawSeries& s : series) {
    out += s.class_label;
    for (double v : s.values) {
      out += separator;
      out += fmt::format("{}", v);
    }
    out += '\n';
  }
  return out;
}

std::vector<double> ResampleLinear(std::span<const double> values,
                                   std::size_t length) {
  if (values.empty() || length == 0) {
    throw std::invalid_argument("ResampleLinear: empty input or target length 0");
  }
  if (values.size() == length) return {values.begin(), values.end()};
  std::vector<double> out(length);
  if (length == 1) {
    out[0] = values[0];
    return out;
  }
  const double span = static_cast<double>(values.size() - 1);
  for (std::size_t i = 0; i < length; ++i) {
    const double pos = span * static_cast<double>(i) / static_cast<double>(length - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= values.size()) {
      out[i] = values.back();
      continue;
    }
    const double frac = pos - static_cast<double>(lo);
    out[i] = frac == 0.0 ? values[lo] : values[lo] + frac * (values[lo + 1] - values[lo]);
  }
  out.back() = values.back();
  return out;
}

ZNormalized ZNormalize(std::span<const double> values) {
  ZNormalized out;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  if (sd < 1e-8) {
    out.values.assign(values.size(), 0.0);
    out.constant = true;
    return out;
  }
  out.values.reserve(values.size());
  for (double v : values) out.values.push_back((v - mean) / sd);
  return out;
}

CorpusIndex::CorpusIndex(std::size_t common_length, std::vector<TimeSeries> series)
    : common_length_(common_length), series_(std::move(series)) {
  if (common_length_ < 2) {
    throw std::invalid_argument("corpus: common length must be >= 2");
  }
  std::map<std::pair<std::string, std::string>, std::size_t> group_ids;
  group_of_.resize(series_.size());
  for (std::size_t i = 0; i < series_.size(); ++i) {
    const TimeSeries& s = series_[i];
    if (s.series_id != static_cast<std::int64_t>(i)) {
      throw std::invalid_argument(
          fmt::format("corpus: series at position {} has id {}", i, s.series_id));
    }
    if (s.values.size() != common_length_) {
      throw std::invalid_argument(fmt::format(
          "corpus: series {} has length {}, expected {}", i, s.values.size(),
          common_length_));
    }
    if (!std::all_of(s.values.begin(), s.values.end(),
                     [](double v) { return std::isfinite(v); })) {
      throw std::invalid_argument(fmt::format("corpus: series {} is not finite", i));
    }
    const auto key = std::make_pair(s.dataset_id, s.class_label);
    auto [it, inserted] = group_ids.emplace(key, groups_.size());
    if (inserted) groups_.push_back({s.dataset_id, s.class_label, {}});
    groups_[it->second].members.push_back(s.series_id);
    group_of_[i] = it->second;
    splits_[static_cast<std::size_t>(s.split)].push_back(s.series_id);
  }
}

const TimeSeries& CorpusIndex::Get(std::int64_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= series_.size()) {
    throw std::out_of_range(fmt::format("corpus has no series {}", id));
  }
  return series_[static_cast<std::size_t>(id)];
}

std::size_t CorpusIndex::GroupOf(std::int64_t id) const {
  Get(id);
  return group_of_[static_cast<std::size_t>(id)];
}

const std::vector<std::int64_t>& CorpusIndex::Members(Split split) const {
  return splits_[static_cast<std::size_t>(split)];
}

std::vector<EvalItem> CorpusIndex::EvalItems(Split split) const {
  return EvalItems(Members(split));
}

std::vector<EvalItem> CorpusIndex::EvalItems(std::span<const std::int64_t> ids) const {
  std::vector<EvalItem> items;
  items.reserve(ids.size());
  for (std::int64_t id : ids) {
    items.push_back({id, Get(id).values, static_cast<std::int64_t>(GroupOf(id))});
  }
  return items;
}

CorpusIndex BuildCorpus(std::span<const LabeledSeries> input,
                        const SplitRatios& ratios, std::size_t length,
                        std::uint64_t seed) {
  if (input.empty()) throw std::invalid_argument("BuildCorpus: no series");
  if (ratios.train <= 0.0 || ratios.val < 0.0 || ratios.test < 0.0) {
    throw std::invalid_argument("BuildCorpus: invalid split ratios");
  }
  const double total = ratios.train + ratios.val + ratios.test;
  const double val_ratio = ratios.val / total;
  const double test_ratio = ratios.test / total;

  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < input.size(); ++i) {
    groups[{input[i].dataset_id, input[i].raw.class_label}].push_back(i);
  }

  std::vector<Split> split_of(input.size(), Split::kTrain);
  std::mt19937_64 rng(seed);
  for (auto& [key, members] : groups) {
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t n = members.size();
    if (n < 2) continue;
    auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_ratio));
    auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * val_ratio));
    while (n_test + n_val >= n) {
      if (n_val >= n_test && n_val > 0) {
        --n_val;
      } else {
        --n_test;
      }
    }
    for (std::size_t r = 0; r < n; ++r) {
      split_of[members[r]] = r < n_test           ? Split::kTest
                             : r < n_test + n_val ? Split::kVal
                                                  : Split::kTrain;
    }
  }

  std::vector<TimeSeries> series;
  series.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    TimeSeries s;
    s.series_id = static_cast<std::int64_t>(i);
    s.dataset_id = input[i].dataset_id;
    s.class_label = input[i].raw.class_label;
    s.split = split_of[i];
    ZNormalized z = ZNormalize(ResampleLinear(input[i].raw.values, length));
    s.values = std::move(z.values);
    s.constant = z.constant;
    series.push_back(std::move(s));
  }
  return CorpusIndex(length, std::move(series));
}

namespace {

bool IsSeriesFile(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  return ext == ".tsv" || ext == ".csv" || ext == ".txt";
}

}  // namespace

std::vector<LabeledSeries> ReadUcrArchive(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) {
    throw std::invalid_argument("archive directory not found: " + root.string());
  }
  std::vector<fs::path> datasets;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) datasets.push_back(entry.path());
  }
  std::sort(datasets.begin(), datasets.end());

  std::vector<LabeledSeries> out;
  for (const fs::path& dir : datasets) {
    std::vector<fs::path> split_files;
    std::vector<fs::path> other_files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file() || !IsSeriesFile(entry.path())) continue;
      const std::string stem = entry.path().stem().string();
      if (stem.ends_with("_TRAIN") || stem.ends_with("_TEST")) {
        split_files.push_back(entry.path());
      } else {
        other_files.push_back(entry.path());
      }
    }
    auto& files = split_files.empty() ? other_files : split_files;
    std::sort(files.begin(), files.end());
    const std::string dataset_id = dir.filename().string();
    for (const fs::path& f : files) {
      for (RawSeries& s : ParseUcrFile(f).series) {
        out.push_back({dataset_id, std::move(s)});
      }
    }
  }
  if (out.empty()) {
    throw std::invalid_argument("no series found under " + root.string());
  }
  return out;
}

CorpusIndex BuildCorpusFromArchive(const std::filesystem::path& root,
                                   const SplitRatios& ratios, std::size_t length,
                                   std::uint64_t seed) {
  const auto input = ReadUcrArchive(root);
  return BuildCorpus(input, ratios, length, seed);
}

}  // namespace ctsr

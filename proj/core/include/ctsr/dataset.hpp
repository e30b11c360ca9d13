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

#ifndef CTSR_DATASET_HPP_
#define CTSR_DATASET_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctsr/evaluation.hpp"
#include "ctsr/series.hpp"

namespace ctsr {

// One labelled series as read from a UCR-style file.
struct RawSeries {
  std::string class_label;
  std::vector<double> values;

  friend bool operator==(const RawSeries&, const RawSeries&) = default;
};

struct UcrParseResult {
  std::vector<RawSeries> series;
  // 1-based line numbers of rows dropped for having fewer than two values.
  std::vector<std::size_t> rejected_lines;
};

// One series per line: label, then values, separated by tabs or commas
// (whitespace when neither occurs). Empty and "NaN" fields are missing values
// and are dropped. Throws ParseError when a row's field count differs from
// the first row's.
UcrParseResult ParseUcrText(std::string_view text, const std::string& source);
UcrParseResult ParseUcrFile(const std::filesystem::path& path);
std::string SerializeUcr(std::span<const RawSeries> series, char separator = '\t');

// Linear interpolation at `length` evenly spaced positions spanning the
// original index range; both endpoints are kept exactly.
std::vector<double> ResampleLinear(std::span<const double> values,
                                   std::size_t length);

struct ZNormalized {
  std::vector<double> values;
  bool constant = false;  // population std < 1e-8; values are all zero
};
ZNormalized ZNormalize(std::span<const double> values);

// Series sharing (dataset_id, class_label).
struct RelevanceGroup {
  std::string dataset_id;
  std::string class_label;
  std::vector<std::int64_t> members;  // ascending ids
};

// Immutable corpus: series with ids 0..n-1, common length, relevance groups
// and split membership.
class CorpusIndex {
 public:
  // Validates every invariant; throws std::invalid_argument on violation.
  CorpusIndex(std::size_t common_length, std::vector<TimeSeries> series);

  std::size_t common_length() const { return common_length_; }
  std::size_t size() const { return series_.size(); }
  const std::vector<TimeSeries>& series() const { return series_; }
  const TimeSeries& Get(std::int64_t id) const;

  const std::vector<RelevanceGroup>& groups() const { return groups_; }
  std::size_t GroupOf(std::int64_t id) const;
  bool Relevant(std::int64_t a, std::int64_t b) const {
    return GroupOf(a) == GroupOf(b);
  }

  // Ascending ids of one split.
  const std::vector<std::int64_t>& Members(Split split) const;
  std::vector<EvalItem> EvalItems(Split split) const;
  std::vector<EvalItem> EvalItems(std::span<const std::int64_t> ids) const;

  friend bool operator==(const CorpusIndex& a, const CorpusIndex& b) {
    return a.common_length_ == b.common_length_ && a.series_ == b.series_;
  }

 private:
  std::size_t common_length_;
  std::vector<TimeSeries> series_;
  std::vector<RelevanceGroup> groups_;
  std::vector<std::size_t> group_of_;
  std::array<std::vector<std::int64_t>, 3> splits_;
};

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

// Input to corpus construction: a raw series with its dataset.
struct LabeledSeries {
  std::string dataset_id;
  RawSeries raw;
};

// Groups by (dataset_id, class_label), shuffles each group with `seed` and
// splits it by `ratios` (rounded; at least one training member per group, and
// singleton groups stay wholly in train). Series are resampled to `length`
// and z-normalised; ids follow input order.
CorpusIndex BuildCorpus(std::span<const LabeledSeries> input,
                        const SplitRatios& ratios, std::size_t length,
                        std::uint64_t seed);

// Reads a UCR-style tree: one directory per dataset holding *_TRAIN / *_TEST
// files (.tsv, .csv or .txt), which are merged before re-splitting. Throws
// std::invalid_argument when no series are found.
std::vector<LabeledSeries> ReadUcrArchive(const std::filesystem::path& root);

CorpusIndex BuildCorpusFromArchive(const std::filesystem::path& root,
                                   const SplitRatios& ratios, std::size_t length,
                                   std::uint64_t seed);

}  // namespace ctsr

#endif  // CTSR_DATASET_HPP_

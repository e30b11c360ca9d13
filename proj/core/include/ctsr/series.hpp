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

#ifndef CTSR_SERIES_HPP_
#define CTSR_SERIES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctsr {

enum class Split : std::uint8_t { kTrain = 0, kVal = 1, kTest = 2 };

std::string_view SplitName(Split split);
std::optional<Split> ParseSplit(std::string_view name);

// One univariate series with its provenance.
struct TimeSeries {
  std::int64_t series_id = 0;
  std::string dataset_id;
  std::string class_label;
  Split split = Split::kTrain;
  std::vector<double> values;
  // Set when the raw series was constant and normalised to all zeros.
  bool constant = false;

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

}  // namespace ctsr

#endif  // CTSR_SERIES_HPP_

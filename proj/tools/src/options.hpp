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

#ifndef CTSR_TOOLS_OPTIONS_HPP_
#define CTSR_TOOLS_OPTIONS_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctsr/dataset.hpp"

namespace ctsr::cli {

// "10", "5,10,15", "5-15" or a mix such as "1-3,10". Sorted, deduplicated,
// every k >= 1. Throws std::invalid_argument.
std::vector<std::size_t> ParseKs(std::string_view text);

// "train,val,test" fractions, e.g. "0.8,0.1,0.1".
SplitRatios ParseRatios(std::string_view text);

// "train", "val", "test" or "all".
std::optional<Split> ParseSplitOrAll(std::string_view text);

// Comma separated method names, order kept, duplicates removed.
std::vector<std::string> ParseMethodList(std::string_view text);

// Worker threads: an explicit positive request wins, then CTSR_THREADS, then
// the hardware concurrency. Never below 1.
unsigned ResolveThreads(unsigned requested);

// One value per line; blank lines and lines starting with '#' are skipped.
std::vector<double> ReadSingleColumn(const std::filesystem::path& path);

}  // namespace ctsr::cli

#endif  // CTSR_TOOLS_OPTIONS_HPP_

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

#ifndef CTSR_CORPUS_IO_HPP_
#define CTSR_CORPUS_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "ctsr/dataset.hpp"

namespace ctsr {

// Binary corpus file (little-endian), documented in docs/formats.md:
//   magic "CTSRCORP" | u32 version | u64 common_length | u64 count
//   | count x (i64 id, str dataset_id, str class_label, u32 split,
//              u32 flags, common_length x f64 value)
// with str = u32 byte length + bytes, split 0/1/2 = train/val/test and
// flags bit 0 = constant series.
inline constexpr std::string_view kCorpusMagic = "CTSRCORP";
inline constexpr std::uint32_t kCorpusVersion = 1;

std::string EncodeCorpus(const CorpusIndex& corpus);
CorpusIndex DecodeCorpus(std::string_view bytes, const std::string& source);

void SaveCorpus(const std::filesystem::path& path, const CorpusIndex& corpus);
CorpusIndex LoadCorpus(const std::filesystem::path& path);

// series_id,dataset_id,class_label,split,v0,...,v{L-1}
std::string CorpusCsv(const CorpusIndex& corpus);

}  // namespace ctsr

#endif  // CTSR_CORPUS_IO_HPP_

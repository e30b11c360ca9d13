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

#include "ctsr/corpus_io.hpp"

#include <fmt/format.h>

#include "ctsr/binary_io.hpp"
#include "ctsr/error.hpp"

namespace ctsr {

std::string EncodeCorpus(const CorpusIndex& corpus) {
  io::BinaryWriter w;
  w.WriteBytes(kCorpusMagic);
  w.WriteU32(kCorpusVersion);
  w.WriteU64(corpus.common_length());
  w.WriteU64(corpus.size());
  for (const TimeSeries& s : corpus.series()) {
    w.WriteI64(s.series_id);
    w.WriteString(s.dataset_id);
    w.WriteString(s.class_label);
    w.WriteU32(static_cast<std::uint32_t>(s.split));
    w.WriteU32(s.constant ? 1u : 0u);
    for (double v : s.values) w.WriteF64(v);
  }
  return w.bytes();
}

CorpusIndex DecodeCorpus(std::string_view bytes, const std::string& source) {
  io::BinaryReader r(bytes, source);
  if (r.ReadBytes(kCorpusMagic.size()) != kCorpusMagic) {
    throw ParseError(source, 0, "not a corpus file (bad magic)");
  }
  const std::uint32_t version = r.ReadU32();
  if (version != kCorpusVersion) {
    throw ParseError(source, 0, fmt::format("unsupported corpus version {}", version));
  }
  const std::uint64_t length = r.ReadU64();
  const std::uint64_t count = r.ReadU64();
  std::vector<TimeSeries> series;
  for (std::uint64_t i = 0; i < count; ++i) {
    TimeSeries s;
    s.series_id = r.ReadI64();
    s.dataset_id = r.ReadString();
    s.class_label = r.ReadString();
    const std::uint32_t split = r.ReadU32();
    if (split > 2) {
      throw ParseError(source, 0, fmt::format("series {} has split code {}", i, split));
    }
    s.split = static_cast<Split>(split);
    s.constant = (r.ReadU32() & 1u) != 0;
    s.values.resize(length);
    for (double& v : s.values) v = r.ReadF64();
    series.push_back(std::move(s));
  }
  if (!r.at_end()) throw ParseError(source, 0, "trailing bytes after series");
  return CorpusIndex(length, std::move(series));
}

void SaveCorpus(const std::filesystem::path& path, const CorpusIndex& corpus) {
  io::WriteFileAtomic(path, EncodeCorpus(corpus));
}

CorpusIndex LoadCorpus(const std::filesystem::path& path) {
  return DecodeCorpus(io::ReadFile(path), path.string());
}

std::string CorpusCsv(const CorpusIndex& corpus) {
  std::string out = "series_id,dataset_id,class_label,split";
  for (std::size_t i = 0; i < corpus.common_length(); ++i) out += fmt::format(",v{}", i);
  out += '\n';
  for (const TimeSeries& s : corpus.series()) {
    out += fmt::format("{},{},{},{}", s.series_id, s.dataset_id, s.class_label,
                       SplitName(s.split));
    for (double v : s.values) out += fmt::format(",{}", v);
    out += '\n';
  }
  return out;
}

}  // namespace ctsr

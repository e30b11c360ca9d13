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

#include "ctsr/checkpoint.hpp"

#include "ctsr/binary_io.hpp"
#include "ctsr/error.hpp"

namespace ctsr {

const Tensor& Checkpoint::Find(const std::string& name) const {
  for (const auto& [n, t] : params) {
    if (n == name) return t;
  }
  throw std::out_of_range("checkpoint has no parameter '" + name + "'");
}

std::string EncodeCheckpoint(const Checkpoint& ckpt) {
  io::BinaryWriter w;
  w.WriteBytes(kCheckpointMagic);
  w.WriteU32(kCheckpointVersion);
  w.WriteU32(static_cast<std::uint32_t>(ckpt.metadata.size()));
  for (const auto& [k, v] : ckpt.metadata) {
    w.WriteString(k);
    w.WriteString(v);
  }
  w.WriteU32(static_cast<std::uint32_t>(ckpt.params.size()));
  for (const auto& [name, t] : ckpt.params) {
    w.WriteString(name);
    w.WriteU32(static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) w.WriteU64(d);
    for (double v : t.data()) w.WriteF64(v);
  }
  return w.bytes();
}

Checkpoint DecodeCheckpoint(std::string_view bytes, const std::string& source) {
  io::BinaryReader r(bytes, source);
  if (r.ReadBytes(kCheckpointMagic.size()) != kCheckpointMagic) {
    throw ParseError(source, 0, "not a checkpoint file (bad magic)");
  }
  const std::uint32_t version = r.ReadU32();
  if (version != kCheckpointVersion) {
    throw ParseError(source, 0,
                     "unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  const std::uint32_t n_meta = r.ReadU32();
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    std::string key = r.ReadString();
    ckpt.metadata[key] = r.ReadString();
  }
  const std::uint32_t n_params = r.ReadU32();
  for (std::uint32_t i = 0; i < n_params; ++i) {
    std::string name = r.ReadString();
    const std::uint32_t rank = r.ReadU32();
    Shape shape(rank);
    for (auto& d : shape) d = r.ReadU64();
    std::vector<double> values(ShapeSize(shape));
    for (double& v : values) v = r.ReadF64();
    ckpt.params.emplace_back(std::move(name),
                             Tensor(std::move(shape), std::move(values)));
  }
  if (!r.at_end()) throw ParseError(source, 0, "trailing bytes after parameters");
  return ckpt;
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  io::WriteFileAtomic(path, EncodeCheckpoint(ckpt));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  return DecodeCheckpoint(io::ReadFile(path), path.string());
}

}  // namespace ctsr

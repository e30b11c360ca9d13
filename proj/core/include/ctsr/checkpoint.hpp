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

#ifndef CTSR_CHECKPOINT_HPP_
#define CTSR_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctsr/tensor.hpp"

namespace ctsr {

// On-disk layout (little-endian), documented in docs/formats.md:
//   magic "CTSRCKPT" | u32 version | u32 n_meta | n_meta x (str key, str value)
//   | u32 n_params | n_params x (str name, u32 rank, rank x u64 dim,
//   prod(dim) x f64 value)
// where str is a u32 byte length followed by the bytes.
inline constexpr std::string_view kCheckpointMagic = "CTSRCKPT";
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::map<std::string, std::string> metadata;
  std::vector<std::pair<std::string, Tensor>> params;

  const Tensor& Find(const std::string& name) const;
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

std::string EncodeCheckpoint(const Checkpoint& ckpt);
Checkpoint DecodeCheckpoint(std::string_view bytes, const std::string& source);

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace ctsr

#endif  // CTSR_CHECKPOINT_HPP_

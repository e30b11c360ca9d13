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

#ifndef CTSR_BINARY_IO_HPP_
#define CTSR_BINARY_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace ctsr::io {

// Little-endian encoder. Strings are u32 length-prefixed, doubles are raw
// IEEE-754 binary64.
class BinaryWriter {
 public:
  void WriteBytes(std::string_view bytes) { buffer_.append(bytes); }
  void WriteU32(std::uint32_t v);
  void WriteU64(std::uint64_t v);
  void WriteI64(std::int64_t v) { WriteU64(static_cast<std::uint64_t>(v)); }
  void WriteF64(double v);
  void WriteString(std::string_view s);

  const std::string& bytes() const { return buffer_; }

 private:
  std::string buffer_;
};

// Decoder over a borrowed buffer. Truncation raises ParseError naming
// `source`.
class BinaryReader {
 public:
  BinaryReader(std::string_view bytes, std::string source)
      : bytes_(bytes), source_(std::move(source)) {}

  std::string_view ReadBytes(std::size_t n);
  std::uint32_t ReadU32();
  std::uint64_t ReadU64();
  std::int64_t ReadI64() { return static_cast<std::int64_t>(ReadU64()); }
  double ReadF64();
  std::string ReadString();

  bool at_end() const { return pos_ == bytes_.size(); }
  const std::string& source() const { return source_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
  std::string source_;
};

std::string ReadFile(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace ctsr::io

#endif  // CTSR_BINARY_IO_HPP_

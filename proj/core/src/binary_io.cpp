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

#include "ctsr/binary_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ctsr/error.hpp"

namespace ctsr::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

void BinaryWriter::WriteU32(std::uint32_t v) {
  char raw[4];
  std::memcpy(raw, &v, 4);
  buffer_.append(raw, 4);
}

void BinaryWriter::WriteU64(std::uint64_t v) {
  char raw[8];
  std::memcpy(raw, &v, 8);
  buffer_.append(raw, 8);
}

void BinaryWriter::WriteF64(double v) { WriteU64(std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::WriteString(std::string_view s) {
  WriteU32(static_cast<std::uint32_t>(s.size()));
  buffer_.append(s);
}

std::string_view BinaryReader::ReadBytes(std::size_t n) {
  if (bytes_.size() - pos_ < n) {
    throw ParseError(source_, 0,
                     "truncated at byte " + std::to_string(pos_) + " (wanted " +
                         std::to_string(n) + " more)");
  }
  std::string_view out = bytes_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::uint32_t BinaryReader::ReadU32() {
  std::uint32_t v;
  std::memcpy(&v, ReadBytes(4).data(), 4);
  return v;
}

std::uint64_t BinaryReader::ReadU64() {
  std::uint64_t v;
  std::memcpy(&v, ReadBytes(8).data(), 8);
  return v;
}

double BinaryReader::ReadF64() { return std::bit_cast<double>(ReadU64()); }

std::string BinaryReader::ReadString() {
  const std::uint32_t n = ReadU32();
  return std::string(ReadBytes(n));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void WriteFileAtomic(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::system_error(errno, std::generic_category(),
                              "cannot write " + tmp.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      throw std::system_error(errno, std::generic_category(),
                              "short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace ctsr::io

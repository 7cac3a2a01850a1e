// Copyright 2026 The UnityGraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Little-endian primitives shared by the binary file formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gpl/error.hpp"

namespace gpl::detail {

class ByteWriter {
 public:
  void magic(std::string_view m) { bytes_.insert(bytes_.end(), m.begin(), m.end()); }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }

  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

  void f32s(std::span<const float> vs) {
    for (float v : vs) f32(v);
  }

  void raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  void byte(std::uint8_t b) { bytes_.push_back(static_cast<char>(b)); }

  const std::vector<char>& bytes() const noexcept { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class ByteReader {
 public:
  ByteReader(std::vector<char> bytes, std::string source)
      : bytes_(std::move(bytes)), source_(std::move(source)) {}

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  void expect_magic(std::string_view m) {
    if (remaining() < m.size() ||
        std::memcmp(bytes_.data() + pos_, m.data(), m.size()) != 0) {
      throw Error(ErrorCode::FormatError,
                  source_ + ": bad magic, expected '" + std::string(m) + "'");
    }
    pos_ += m.size();
  }

  std::uint32_t u32(const char* field) {
    need(4, field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  float f32(const char* field) { return std::bit_cast<float>(u32(field)); }

  std::string raw(std::size_t n, const char* field) {
    need(n, field);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }

  std::uint8_t byte(const char* field) {
    need(1, field);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }

  // Payload arrays use DimensionError on short reads.
  void f32s(std::span<float> out, const char* field) {
    if (remaining() < out.size() * 4) {
      throw Error(ErrorCode::DimensionError,
                  source_ + ": payload '" + field + "' needs " +
                      std::to_string(out.size() * 4) + " bytes, have " +
                      std::to_string(remaining()));
    }
    for (auto& v : out) v = f32(field);
  }

  void expect_end() const {
    if (remaining() != 0) {
      throw Error(ErrorCode::FormatError,
                  source_ + ": " + std::to_string(remaining()) + " trailing bytes");
    }
  }

  const std::string& source() const noexcept { return source_; }

 private:
  void need(std::size_t n, const char* field) const {
    if (remaining() < n) {
      throw Error(ErrorCode::FormatError,
                  source_ + ": truncated while reading '" + field + "'");
    }
  }

  std::vector<char> bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

std::vector<char> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const char> bytes);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace gpl::detail

// Copyright 2026 The poi-phoneme Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poi/error.hpp"

namespace poi::detail {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian targets are not supported");

// Appends little-endian scalars to a growing byte buffer.
class ByteWriter {
 public:
  void u16(std::uint16_t v) { put_le(v); }
  void u32(std::uint32_t v) { put_le(v); }
  void u64(std::uint64_t v) { put_le(v); }
  void f32(float v) { put_le(std::bit_cast<std::uint32_t>(v)); }

  void raw(std::string_view bytes) {
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  }

  // u16 length prefix followed by the bytes.
  void short_string(std::string_view s) {
    if (s.size() > 0xFFFF) {
      throw Error(ErrorCode::InvalidArgument,
                  "string longer than 65535 bytes cannot be encoded");
    }
    u16(static_cast<std::uint16_t>(s.size()));
    raw(s);
  }

  void f32_array(std::span<const float> values) {
    for (float v : values) f32(v);
  }

  std::vector<std::uint8_t> take() && { return std::move(buf_); }
  std::size_t size() const { return buf_.size(); }

 private:
  template <typename T>
  void put_le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
  }

  std::vector<std::uint8_t> buf_;
};

// Bounds-checked little-endian cursor. Every read that would run past the
// end throws TruncatedFile naming the offset of the failed read.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  bool at_end() const { return pos_ == bytes_.size(); }

  void require(std::uint64_t n, std::string_view what) const {
    if (n > remaining()) {
      throw Error(ErrorCode::TruncatedFile,
                  "need " + std::to_string(n) + " bytes for " +
                      std::string(what) + ", " + std::to_string(remaining()) +
                      " available",
                  pos_);
    }
  }

  std::uint16_t u16(std::string_view what) { return get_le<std::uint16_t>(what); }
  std::uint32_t u32(std::string_view what) { return get_le<std::uint32_t>(what); }
  std::uint64_t u64(std::string_view what) { return get_le<std::uint64_t>(what); }
  float f32(std::string_view what) {
    return std::bit_cast<float>(get_le<std::uint32_t>(what));
  }

  std::string raw(std::size_t n, std::string_view what) {
    require(n, what);
    std::string out(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return out;
  }

  std::string short_string(std::string_view what) {
    const std::uint16_t len = u16(what);
    return raw(len, what);
  }

  void f32_array(std::span<float> out, std::string_view what) {
    require(std::uint64_t{4} * out.size(), what);
    for (float& v : out) v = f32(what);
  }

 private:
  template <typename T>
  T get_le(std::string_view what) {
    require(sizeof(T), what);
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(T);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace poi::detail

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

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "poi/error.hpp"
#include "poi/paf.hpp"
#include "poi/profile.hpp"

namespace poi {

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + p.string());
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed: " + p.string());
  return bytes;
}

// Writes to a sibling temporary and renames over the target, so readers
// never observe a partially written file.
inline void write_file_atomic(const std::filesystem::path& p,
                              std::span<const std::uint8_t> bytes) {
  auto tmp = p;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot create " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::IoError, "write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, p, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot rename onto " + p.string());
  }
}

inline void write_file_atomic(const std::filesystem::path& p, std::string_view text) {
  write_file_atomic(p, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                 text.size()));
}

inline PafFile load_paf_file(const std::filesystem::path& p) {
  try {
    return read_paf(read_file(p));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), p.string() + ": " + e.what());
  }
}

inline SpeakerProfile load_profile_file(const std::filesystem::path& p) {
  try {
    return load_profile(read_file(p));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), p.string() + ": " + e.what());
  }
}

}  // namespace poi

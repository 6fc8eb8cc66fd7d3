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

// RIFF/WAVE PCM16 reader and writer.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "poi/detail/byte_io.hpp"
#include "poi/error.hpp"

namespace poi {

struct AudioTrack {
  std::vector<double> samples;  // nominal range [-1, 1]
  std::uint32_t sample_rate = 16000;

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  bool operator==(const AudioTrack&) const = default;
};

struct WavReadOptions {
  std::uint32_t expected_rate = 16000;
  bool allow_any_rate = false;
};

namespace detail {

inline constexpr std::uint16_t kWaveFormatPcm = 1;
inline constexpr std::uint16_t kWaveFormatExtensible = 0xFFFE;

inline bool chunk_id_is(std::string_view id, const char (&want)[5]) {
  return id == std::string_view(want, 4);
}

}  // namespace detail

inline AudioTrack read_wav(std::span<const std::uint8_t> bytes,
                           const WavReadOptions& opts = {}) {
  detail::ByteReader r(bytes);
  if (bytes.size() < 12 ||
      std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::NotRiff, "missing RIFF/WAVE header", 0);
  }
  r.raw(12, "RIFF header");

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t rate = 0;
  while (true) {
    if (r.remaining() < 8) {
      throw Error(ErrorCode::NotRiff, "no data chunk", r.offset());
    }
    const std::string id = r.raw(4, "chunk id");
    const std::uint32_t size = r.u32("chunk size");
    const std::size_t chunk_at = r.offset();

    if (detail::chunk_id_is(id, "fmt ")) {
      if (size < 16) throw Error(ErrorCode::NotRiff, "fmt chunk too small", chunk_at);
      std::uint16_t format = r.u16("format tag");
      channels = r.u16("channels");
      rate = r.u32("sample rate");
      r.u32("byte rate");
      r.u16("block align");
      bits = r.u16("bits per sample");
      if (format == detail::kWaveFormatExtensible && size >= 40) {
        r.u16("cbSize");
        r.u16("valid bits");
        r.u32("channel mask");
        format = r.u16("sub-format");
        r.raw(14, "sub-format GUID tail");
        r.raw(size - 40 + (size & 1), "fmt padding");
      } else {
        r.raw(size - 16 + (size & 1), "fmt padding");
      }
      if (format != detail::kWaveFormatPcm) {
        throw Error(ErrorCode::UnsupportedCodec,
                    "format tag " + std::to_string(format) + " is not PCM", chunk_at);
      }
      if (bits != 16) {
        throw Error(ErrorCode::UnsupportedBitDepth,
                    std::to_string(bits) + "-bit samples; only 16-bit PCM is read",
                    chunk_at);
      }
      if (channels != 1 && channels != 2) {
        throw Error(ErrorCode::UnsupportedCodec,
                    std::to_string(channels) + " channels; mono or stereo only",
                    chunk_at);
      }
      if (!opts.allow_any_rate && rate != opts.expected_rate) {
        throw Error(ErrorCode::SampleRateMismatch,
                    std::to_string(rate) + " Hz, expected " +
                        std::to_string(opts.expected_rate) + " Hz",
                    chunk_at);
      }
      have_fmt = true;
      continue;
    }

    if (detail::chunk_id_is(id, "data")) {
      if (!have_fmt) throw Error(ErrorCode::NotRiff, "data before fmt chunk", chunk_at);
      std::size_t n_bytes = size;
      if (n_bytes > r.remaining()) {
        warn("data chunk declares " + std::to_string(size) + " bytes, " +
             std::to_string(r.remaining()) + " present; reading what is there");
        n_bytes = r.remaining();
      }
      const std::size_t block = 2u * channels;
      const std::size_t n_frames = n_bytes / block;
      AudioTrack track;
      track.sample_rate = rate;
      track.samples.resize(n_frames);
      if (channels == 2) warn("stereo input averaged to mono");
      for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
          acc += static_cast<std::int16_t>(r.u16("sample"));
        }
        track.samples[i] = acc / channels / 32768.0;
      }
      return track;
    }

    // Unknown chunk (LIST, fact, ...): skip, honouring the pad byte.
    const std::uint64_t skip = std::uint64_t{size} + (size & 1);
    r.raw(static_cast<std::size_t>(std::min<std::uint64_t>(skip, r.remaining())),
          "chunk body");
  }
}

// Mono PCM16, samples scaled by 32768 with round-to-nearest and saturation.
inline std::vector<std::uint8_t> write_wav(const AudioTrack& track) {
  const std::uint64_t data_bytes = 2 * std::uint64_t{track.samples.size()};
  if (data_bytes > 0xFFFFFFFFull - 36) {
    throw Error(ErrorCode::InvalidArgument, "audio too long for a RIFF file");
  }
  detail::ByteWriter w;
  w.raw("RIFF");
  w.u32(static_cast<std::uint32_t>(36 + data_bytes));
  w.raw("WAVE");
  w.raw("fmt ");
  w.u32(16);
  w.u16(detail::kWaveFormatPcm);
  w.u16(1);
  w.u32(track.sample_rate);
  w.u32(track.sample_rate * 2);
  w.u16(2);
  w.u16(16);
  w.raw("data");
  w.u32(static_cast<std::uint32_t>(data_bytes));
  for (double x : track.samples) {
    const double v = std::isnan(x) ? 0.0
                                   : std::clamp(std::nearbyint(x * 32768.0), -32768.0, 32767.0);
    w.u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
  }
  return std::move(w).take();
}

}  // namespace poi

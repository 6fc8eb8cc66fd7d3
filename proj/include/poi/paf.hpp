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

// Phoneme-Aligned Features (PAF): one track's per-frame phoneme labels and
// feature vectors, as produced by the extractor.
//
// Layout (little-endian):
//   "PAF1" | version u16 = 1 | flags u16 = 0 | sample_rate u32 |
//   frame_len u32 | hop u32 | dim u32 |
//   track_id: u16 len + UTF-8 |
//   inventory: u16 count, per label u16 len + UTF-8 |
//   frame_count u64 | per frame: u16 phoneme_id, dim x f32

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "poi/detail/byte_io.hpp"
#include "poi/error.hpp"

namespace poi {

using Vector = std::vector<float>;

inline constexpr std::uint16_t kNoPhoneme = 0xFFFF;
inline constexpr std::uint16_t kPafVersion = 1;
inline constexpr std::string_view kPafMagic = "PAF1";

// Default frame grid: 25 ms windows every 20 ms at 16 kHz.
inline constexpr std::uint32_t kDefaultSampleRate = 16000;
inline constexpr std::uint32_t kDefaultFrameLen = 400;
inline constexpr std::uint32_t kDefaultHop = 320;

struct PhonemeInventory {
  std::vector<std::string> labels;

  std::size_t size() const { return labels.size(); }

  std::optional<std::uint16_t> find(std::string_view label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<std::uint16_t>(it - labels.begin());
  }

  void validate() const {
    if (labels.size() >= kNoPhoneme) {
      throw Error(ErrorCode::TooManyPhonemes,
                  std::to_string(labels.size()) +
                      " labels; the inventory holds at most 65534");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& l : labels) {
      if (l.empty()) {
        throw Error(ErrorCode::InvalidInventory, "empty phoneme label");
      }
      if (!seen.insert(l).second) {
        throw Error(ErrorCode::InvalidInventory, "duplicate label '" + l + "'");
      }
    }
  }

  bool operator==(const PhonemeInventory&) const = default;
};

struct FrameRecord {
  std::uint16_t phoneme_id = kNoPhoneme;
  Vector features;

  bool is_silence() const { return phoneme_id == kNoPhoneme; }
  bool operator==(const FrameRecord&) const = default;
};

struct PafFile {
  std::string track_id;
  std::uint32_t sample_rate = kDefaultSampleRate;
  std::uint32_t frame_len = kDefaultFrameLen;
  std::uint32_t hop = kDefaultHop;
  std::uint32_t dim = 0;
  PhonemeInventory inventory;
  std::vector<FrameRecord> frames;

  double frame_to_seconds(std::size_t frame) const {
    return static_cast<double>(frame) * hop / sample_rate;
  }

  void validate() const {
    inventory.validate();
    if (dim == 0) throw Error(ErrorCode::DimMismatch, "dim must be positive");
    if (sample_rate == 0 || hop == 0) {
      throw Error(ErrorCode::InvalidArgument, "sample_rate and hop must be positive");
    }
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto& f = frames[i];
      if (f.features.size() != dim) {
        throw Error(ErrorCode::DimMismatch,
                    "frame " + std::to_string(i) + " has " +
                        std::to_string(f.features.size()) +
                        " features, file dim is " + std::to_string(dim));
      }
      if (!f.is_silence() && f.phoneme_id >= inventory.size()) {
        throw Error(ErrorCode::InvalidPhonemeId,
                    "frame " + std::to_string(i) + " phoneme id " +
                        std::to_string(f.phoneme_id) + " outside inventory");
      }
    }
  }

  bool operator==(const PafFile&) const = default;
};

// One realization of a phoneme: a maximal run of equally labelled frames.
struct PhonemeSegment {
  std::string phoneme;
  Vector embedding;
  std::size_t start_frame = 0;  // inclusive
  std::size_t end_frame = 0;    // exclusive
  double start_time = 0.0;
  double end_time = 0.0;

  std::size_t frame_count() const { return end_frame - start_frame; }
  bool operator==(const PhonemeSegment&) const = default;
};

// Phoneme label -> embeddings of its occurrences, in occurrence order.
using PhonemeSets = std::map<std::string, std::vector<Vector>>;

namespace detail {

// Arithmetic mean accumulated in double, stored as float.
template <typename FrameRange>
Vector mean_features(const FrameRange& frames, std::size_t dim) {
  std::vector<double> acc(dim, 0.0);
  std::size_t n = 0;
  for (const FrameRecord& f : frames) {
    for (std::size_t k = 0; k < dim; ++k) acc[k] += f.features[k];
    ++n;
  }
  Vector out(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    out[k] = static_cast<float>(acc[k] / static_cast<double>(n));
  }
  return out;
}

}  // namespace detail

inline std::vector<std::uint8_t> write_paf(const PafFile& paf) {
  paf.validate();
  detail::ByteWriter w;
  w.raw(kPafMagic);
  w.u16(kPafVersion);
  w.u16(0);
  w.u32(paf.sample_rate);
  w.u32(paf.frame_len);
  w.u32(paf.hop);
  w.u32(paf.dim);
  w.short_string(paf.track_id);
  w.u16(static_cast<std::uint16_t>(paf.inventory.size()));
  for (const auto& label : paf.inventory.labels) w.short_string(label);
  w.u64(paf.frames.size());
  for (const auto& f : paf.frames) {
    w.u16(f.phoneme_id);
    w.f32_array(f.features);
  }
  return std::move(w).take();
}

inline PafFile read_paf(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  {
    const std::size_t n = std::min(bytes.size(), kPafMagic.size());
    if (!std::equal(bytes.begin(), bytes.begin() + n, kPafMagic.begin())) {
      throw Error(ErrorCode::BadMagic, "expected \"PAF1\"", 0);
    }
    r.raw(kPafMagic.size(), "magic");
  }
  const std::size_t version_at = r.offset();
  const std::uint16_t version = r.u16("version");
  if (version != kPafVersion) {
    throw Error(ErrorCode::UnsupportedVersion,
                "version " + std::to_string(version), version_at);
  }
  const std::size_t flags_at = r.offset();
  if (const std::uint16_t flags = r.u16("flags"); flags != 0) {
    throw Error(ErrorCode::UnsupportedVersion,
                "unknown flags " + std::to_string(flags), flags_at);
  }

  PafFile paf;
  paf.sample_rate = r.u32("sample_rate");
  paf.frame_len = r.u32("frame_len");
  paf.hop = r.u32("hop");
  const std::size_t dim_at = r.offset();
  paf.dim = r.u32("dim");
  if (paf.dim == 0) throw Error(ErrorCode::DimMismatch, "dim is zero", dim_at);
  paf.track_id = r.short_string("track_id");

  const std::size_t inventory_at = r.offset();
  const std::uint16_t label_count = r.u16("inventory count");
  if (label_count == kNoPhoneme) {
    throw Error(ErrorCode::TooManyPhonemes, "inventory count 65535", inventory_at);
  }
  paf.inventory.labels.reserve(label_count);
  for (std::uint16_t i = 0; i < label_count; ++i) {
    const std::size_t label_at = r.offset();
    paf.inventory.labels.push_back(r.short_string("inventory label"));
    const auto& l = paf.inventory.labels.back();
    if (l.empty()) {
      throw Error(ErrorCode::InvalidInventory, "empty phoneme label", label_at);
    }
    if (std::find(paf.inventory.labels.begin(), paf.inventory.labels.end() - 1,
                  l) != paf.inventory.labels.end() - 1) {
      throw Error(ErrorCode::InvalidInventory, "duplicate label '" + l + "'",
                  label_at);
    }
  }

  const std::uint64_t frame_count = r.u64("frame_count");
  const std::uint64_t frame_bytes = 2 + std::uint64_t{4} * paf.dim;
  if (frame_count > r.remaining() / frame_bytes) {
    throw Error(ErrorCode::TruncatedFile,
                std::to_string(frame_count) + " frames declared, " +
                    std::to_string(r.remaining()) + " payload bytes available",
                r.offset());
  }
  paf.frames.resize(static_cast<std::size_t>(frame_count));
  for (auto& f : paf.frames) {
    const std::size_t frame_at = r.offset();
    f.phoneme_id = r.u16("phoneme_id");
    if (f.phoneme_id != kNoPhoneme && f.phoneme_id >= label_count) {
      throw Error(ErrorCode::InvalidPhonemeId,
                  "phoneme id " + std::to_string(f.phoneme_id) +
                      " with inventory of " + std::to_string(label_count),
                  frame_at);
    }
    f.features.resize(paf.dim);
    r.f32_array(f.features, "features");
  }
  if (!r.at_end()) {
    throw Error(ErrorCode::DimMismatch,
                std::to_string(r.remaining()) +
                    " trailing bytes; payload inconsistent with declared dim",
                r.offset());
  }
  return paf;
}

// Maximal runs of consecutive identical labels, silence excluded. A label
// repeated after a silence gap starts a new segment.
inline std::vector<PhonemeSegment> segment_phonemes(const PafFile& paf) {
  std::vector<PhonemeSegment> segments;
  const auto& frames = paf.frames;
  std::size_t i = 0;
  while (i < frames.size()) {
    const std::uint16_t id = frames[i].phoneme_id;
    std::size_t j = i + 1;
    while (j < frames.size() && frames[j].phoneme_id == id) ++j;
    if (id != kNoPhoneme) {
      PhonemeSegment seg;
      seg.phoneme = paf.inventory.labels.at(id);
      seg.embedding = detail::mean_features(
          std::span<const FrameRecord>(frames.data() + i, j - i), paf.dim);
      seg.start_frame = i;
      seg.end_frame = j;
      seg.start_time = paf.frame_to_seconds(i);
      seg.end_time = paf.frame_to_seconds(j);
      segments.push_back(std::move(seg));
    }
    i = j;
  }
  return segments;
}

inline PhonemeSets track_phoneme_sets(std::span<const PhonemeSegment> segments) {
  PhonemeSets sets;
  for (const auto& s : segments) sets[s.phoneme].push_back(s.embedding);
  return sets;
}

}  // namespace poi

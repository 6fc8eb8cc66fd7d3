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

// Speaker profiles: per-phoneme reference embeddings plus one utterance-level
// embedding per reference track.
//
// Binary layout (little-endian):
//   "POIP" | version u16 = 1 | dim u32 | speaker_id: u16 len + UTF-8 |
//   n_reference_tracks u32 | baseline_count u32, baseline vectors (dim x f32) |
//   phoneme_count u16, per phoneme: label (u16 len + UTF-8),
//   vector_count u32, vectors (dim x f32)
// Phonemes are written in byte-wise label order.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poi/detail/byte_io.hpp"
#include "poi/error.hpp"
#include "poi/paf.hpp"

namespace poi {

inline constexpr std::string_view kProfileMagic = "POIP";
inline constexpr std::uint16_t kProfileVersion = 1;

struct SpeakerProfile {
  std::string speaker_id;
  std::uint32_t dim = 0;
  PhonemeSets phoneme_entries;        // phonemes realized in the references
  std::vector<Vector> baseline_entries;  // one frame-mean per reference track
  std::uint32_t n_reference_tracks = 0;

  const std::vector<Vector>* entry(std::string_view phoneme) const {
    auto it = phoneme_entries.find(std::string(phoneme));
    return it == phoneme_entries.end() ? nullptr : &it->second;
  }

  std::size_t occurrence_count() const {
    std::size_t n = 0;
    for (const auto& [_, v] : phoneme_entries) n += v.size();
    return n;
  }

  bool operator==(const SpeakerProfile&) const = default;
};

struct EnrollmentConfig {
  std::size_t max_reference_tracks = 100;
  // Fraction of the inventory that should be realized; below it only warns.
  double min_phoneme_coverage = 0.0;
};

// What build_profile did with its input list.
struct EnrollmentLog {
  std::size_t used_tracks = 0;
  std::size_t skipped_empty_tracks = 0;
  std::size_t ignored_over_cap = 0;
};

namespace detail {

inline Vector track_mean_embedding(const PafFile& paf) {
  if (paf.frames.empty()) {
    throw Error(ErrorCode::EmptyTrack, "track '" + paf.track_id + "' has no frames");
  }
  return mean_features(paf.frames, paf.dim);
}

}  // namespace detail

// Uses the first `max_reference_tracks` non-empty tracks in list order.
// Baseline vectors average every frame of a track, silence included; the
// phoneme entries only see labelled frames.
inline SpeakerProfile build_profile(std::string speaker_id,
                                    std::span<const PafFile> references,
                                    const EnrollmentConfig& config = {},
                                    EnrollmentLog* log = nullptr) {
  if (config.max_reference_tracks < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_reference_tracks must be >= 1");
  }
  if (references.empty()) {
    throw Error(ErrorCode::EmptyReferenceSet,
                "no reference tracks for speaker '" + speaker_id + "'");
  }
  SpeakerProfile profile;
  profile.speaker_id = std::move(speaker_id);
  profile.dim = references.front().dim;

  EnrollmentLog local;
  for (const PafFile& paf : references) {
    if (paf.dim != profile.dim) {
      throw Error(ErrorCode::DimMismatch,
                  "track '" + paf.track_id + "' has dim " + std::to_string(paf.dim) +
                      ", expected " + std::to_string(profile.dim));
    }
    if (paf.frames.empty()) {
      ++local.skipped_empty_tracks;
      warn("reference track '" + paf.track_id + "' has zero frames; skipped");
      continue;
    }
    if (local.used_tracks == config.max_reference_tracks) {
      ++local.ignored_over_cap;
      continue;
    }
    for (auto& [label, vectors] : track_phoneme_sets(segment_phonemes(paf))) {
      auto& dst = profile.phoneme_entries[label];
      dst.insert(dst.end(), std::make_move_iterator(vectors.begin()),
                 std::make_move_iterator(vectors.end()));
    }
    profile.baseline_entries.push_back(detail::track_mean_embedding(paf));
    ++local.used_tracks;
  }
  if (local.ignored_over_cap > 0) {
    warn("speaker '" + profile.speaker_id + "': reference cap of " +
         std::to_string(config.max_reference_tracks) + " reached; " +
         std::to_string(local.ignored_over_cap) + " later tracks ignored");
  }
  if (local.used_tracks == 0) {
    throw Error(ErrorCode::EmptyReferenceSet,
                "every reference track of '" + profile.speaker_id + "' is empty");
  }
  profile.n_reference_tracks = static_cast<std::uint32_t>(local.used_tracks);
  if (log) *log = local;
  return profile;
}

inline std::vector<std::uint8_t> save_profile(const SpeakerProfile& p) {
  if (p.phoneme_entries.size() > 0xFFFF) {
    throw Error(ErrorCode::TooManyPhonemes, "profile has more than 65535 phonemes");
  }
  detail::ByteWriter w;
  w.raw(kProfileMagic);
  w.u16(kProfileVersion);
  w.u32(p.dim);
  w.short_string(p.speaker_id);
  w.u32(p.n_reference_tracks);
  auto put_vectors = [&](const std::vector<Vector>& vs) {
    w.u32(static_cast<std::uint32_t>(vs.size()));
    for (const auto& v : vs) {
      if (v.size() != p.dim) {
        throw Error(ErrorCode::DimMismatch, "profile vector of length " +
                                                std::to_string(v.size()) +
                                                " in a dim " +
                                                std::to_string(p.dim) + " profile");
      }
      w.f32_array(v);
    }
  };
  put_vectors(p.baseline_entries);
  w.u16(static_cast<std::uint16_t>(p.phoneme_entries.size()));
  for (const auto& [label, vectors] : p.phoneme_entries) {
    w.short_string(label);
    put_vectors(vectors);
  }
  return std::move(w).take();
}

inline SpeakerProfile load_profile(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  {
    const std::size_t n = std::min(bytes.size(), kProfileMagic.size());
    if (!std::equal(bytes.begin(), bytes.begin() + n, kProfileMagic.begin())) {
      throw Error(ErrorCode::BadMagic, "expected \"POIP\"", 0);
    }
    r.raw(kProfileMagic.size(), "magic");
  }
  const std::size_t version_at = r.offset();
  if (const std::uint16_t v = r.u16("version"); v != kProfileVersion) {
    throw Error(ErrorCode::UnsupportedVersion, "profile version " + std::to_string(v),
                version_at);
  }
  SpeakerProfile p;
  const std::size_t dim_at = r.offset();
  p.dim = r.u32("dim");
  if (p.dim == 0) throw Error(ErrorCode::DimMismatch, "dim is zero", dim_at);
  p.speaker_id = r.short_string("speaker_id");
  p.n_reference_tracks = r.u32("n_reference_tracks");

  auto get_vectors = [&](std::string_view what) {
    const std::size_t count_at = r.offset();
    const std::uint32_t count = r.u32(what);
    if (count > r.remaining() / (std::uint64_t{4} * p.dim)) {
      throw Error(ErrorCode::TruncatedFile,
                  std::to_string(count) + " vectors declared for " +
                      std::string(what) + ", " + std::to_string(r.remaining()) +
                      " bytes available",
                  count_at);
    }
    std::vector<Vector> vs(count, Vector(p.dim));
    for (auto& v : vs) r.f32_array(v, what);
    return std::pair{count_at, std::move(vs)};
  };

  auto [baseline_at, baseline] = get_vectors("baseline vectors");
  if (baseline.size() != p.n_reference_tracks) {
    throw Error(ErrorCode::InvalidProfile,
                std::to_string(baseline.size()) + " baseline vectors for " +
                    std::to_string(p.n_reference_tracks) + " reference tracks",
                baseline_at);
  }
  p.baseline_entries = std::move(baseline);

  const std::uint16_t phoneme_count = r.u16("phoneme_count");
  for (std::uint16_t i = 0; i < phoneme_count; ++i) {
    const std::size_t label_at = r.offset();
    std::string label = r.short_string("phoneme label");
    if (label.empty()) {
      throw Error(ErrorCode::InvalidProfile, "empty phoneme label", label_at);
    }
    if (!p.phoneme_entries.empty() && label <= p.phoneme_entries.rbegin()->first) {
      throw Error(ErrorCode::InvalidProfile,
                  "phoneme '" + label + "' duplicated or out of order", label_at);
    }
    auto [entry_at, vectors] = get_vectors("phoneme vectors");
    if (vectors.empty()) {
      throw Error(ErrorCode::InvalidProfile, "phoneme '" + label + "' has no vectors",
                  entry_at);
    }
    p.phoneme_entries.emplace_hint(p.phoneme_entries.end(), std::move(label),
                                   std::move(vectors));
  }
  if (!r.at_end()) {
    throw Error(ErrorCode::InvalidProfile,
                std::to_string(r.remaining()) + " trailing bytes", r.offset());
  }
  return p;
}

struct CoverageReport {
  std::map<std::string, std::size_t> occurrences;  // inventory label -> count
  double coverage = 1.0;                           // covered / inventory size
  std::vector<std::string> missing;                // inventory order
};

inline CoverageReport profile_coverage(const SpeakerProfile& profile,
                                       const PhonemeInventory& inventory) {
  CoverageReport report;
  if (inventory.labels.empty()) {
    warn("coverage against an empty inventory is vacuously 1.0");
    return report;
  }
  std::size_t covered = 0;
  for (const auto& label : inventory.labels) {
    const auto* entry = profile.entry(label);
    const std::size_t n = entry ? entry->size() : 0;
    report.occurrences[label] = n;
    if (n > 0) {
      ++covered;
    } else {
      report.missing.push_back(label);
    }
  }
  report.coverage = static_cast<double>(covered) / inventory.labels.size();
  return report;
}

}  // namespace poi

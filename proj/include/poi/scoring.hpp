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

// Track-vs-profile scoring. Higher scores mean "further from the speaker",
// i.e. more likely fake.

#pragma once

#include <algorithm>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "poi/categories.hpp"
#include "poi/distance.hpp"
#include "poi/error.hpp"
#include "poi/paf.hpp"
#include "poi/profile.hpp"

namespace poi {

enum class ScoreMode { Phoneme, Baseline };

inline constexpr std::string_view mode_name(ScoreMode m) {
  return m == ScoreMode::Phoneme ? "phoneme" : "baseline";
}

inline ScoreMode parse_mode(std::string_view s) {
  if (s == "phoneme") return ScoreMode::Phoneme;
  if (s == "baseline") return ScoreMode::Baseline;
  throw Error(ErrorCode::InvalidArgument, "unknown scoring mode '" + std::string(s) + "'");
}

struct PhonemeDistance {
  PhonemeSegment segment;
  double distance = 0.0;
  std::size_t matched_reference_index = 0;
};

struct SkippedOccurrence {
  std::string phoneme;
  double start_time = 0.0;
  double end_time = 0.0;
};

struct TrackScore {
  std::string track_id;
  ScoreMode mode = ScoreMode::Phoneme;
  CategoryName category = CategoryName::All;
  double score = 0.0;
  std::vector<PhonemeDistance> per_phoneme;       // phoneme mode only
  std::size_t n_phonemes = 0;
  std::vector<SkippedOccurrence> skipped_phonemes;  // labels absent from profile
  std::size_t matched_reference_index = 0;        // baseline mode only
};

// Mean over occurrences of the nearest same-phoneme reference distance.
// Occurrences of phonemes the profile never saw are listed as skipped and
// left out of the mean.
inline TrackScore score_track_phoneme(std::span<const PhonemeSegment> segments,
                                      const SpeakerProfile& profile,
                                      std::string track_id = {}) {
  TrackScore out;
  out.track_id = std::move(track_id);
  out.mode = ScoreMode::Phoneme;
  double sum = 0.0;
  for (const auto& seg : segments) {
    if (seg.embedding.size() != profile.dim) {
      throw Error(ErrorCode::DimMismatch,
                  "segment dim " + std::to_string(seg.embedding.size()) +
                      " vs profile dim " + std::to_string(profile.dim));
    }
    const auto* entry = profile.entry(seg.phoneme);
    if (entry == nullptr) {
      out.skipped_phonemes.push_back({seg.phoneme, seg.start_time, seg.end_time});
      continue;
    }
    const NearestReference nn = phoneme_min_distance(seg.embedding, *entry);
    sum += nn.distance;
    out.per_phoneme.push_back({seg, nn.distance, nn.index});
  }
  if (out.per_phoneme.empty()) {
    throw Error(ErrorCode::NoScorablePhonemes,
                segments.empty()
                    ? "track has no phoneme occurrences"
                    : "none of the track's " + std::to_string(segments.size()) +
                          " occurrences has a phoneme present in profile '" +
                          profile.speaker_id + "'");
  }
  out.n_phonemes = out.per_phoneme.size();
  out.score = sum / static_cast<double>(out.n_phonemes);
  return out;
}

inline Vector baseline_track_embedding(const PafFile& paf) {
  return detail::track_mean_embedding(paf);
}

inline TrackScore score_track_baseline(const PafFile& paf, const SpeakerProfile& profile) {
  if (profile.baseline_entries.empty()) {
    throw Error(ErrorCode::EmptyReferenceSet,
                "profile '" + profile.speaker_id + "' has no baseline vectors");
  }
  if (paf.dim != profile.dim) {
    throw Error(ErrorCode::DimMismatch, "track dim " + std::to_string(paf.dim) +
                                            " vs profile dim " +
                                            std::to_string(profile.dim));
  }
  const Vector embedding = baseline_track_embedding(paf);
  const NearestReference nn = phoneme_min_distance(embedding, profile.baseline_entries);
  TrackScore out;
  out.track_id = paf.track_id;
  out.mode = ScoreMode::Baseline;
  out.score = nn.distance;
  out.matched_reference_index = nn.index;
  return out;
}

inline TrackScore score_track_category(std::span<const PhonemeSegment> segments,
                                       const SpeakerProfile& profile,
                                       const PhonemeCategory& category,
                                       std::string track_id = {}) {
  std::vector<PhonemeSegment> kept;
  for (const auto& s : segments) {
    if (category.contains(s.phoneme)) kept.push_back(s);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::NoScorablePhonemes,
                "track has no occurrences in category " +
                    std::string(category_name(category.name)));
  }
  try {
    TrackScore out = score_track_phoneme(kept, profile, std::move(track_id));
    out.category = category.name;
    return out;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoScorablePhonemes) throw;
    throw Error(ErrorCode::NoScorablePhonemes,
                "no occurrence in category " +
                    std::string(category_name(category.name)) +
                    " has a phoneme present in profile '" + profile.speaker_id + "'");
  }
}

struct OccurrenceRecord {
  std::string phoneme;
  double start_time = 0.0;
  double end_time = 0.0;
  double distance = 0.0;
  std::size_t matched_reference_index = 0;
};

struct PhonemeAggregate {
  std::string phoneme;
  std::size_t occurrences = 0;
  double mean_distance = 0.0;
};

struct PhonemeReport {
  std::string track_id;
  std::vector<OccurrenceRecord> occurrences;  // time order
  std::vector<PhonemeAggregate> ranking;      // mean distance, largest first

  std::span<const PhonemeAggregate> top(std::size_t k) const {
    return std::span(ranking).first(std::min(k, ranking.size()));
  }
};

inline PhonemeReport per_phoneme_report(const TrackScore& score) {
  if (score.mode != ScoreMode::Phoneme) {
    throw Error(ErrorCode::WrongMode, "per-phoneme report needs a phoneme-mode score");
  }
  PhonemeReport report;
  report.track_id = score.track_id;
  for (const auto& pd : score.per_phoneme) {
    report.occurrences.push_back({pd.segment.phoneme, pd.segment.start_time,
                                  pd.segment.end_time, pd.distance,
                                  pd.matched_reference_index});
  }
  std::stable_sort(report.occurrences.begin(), report.occurrences.end(),
                   [](const auto& a, const auto& b) { return a.start_time < b.start_time; });

  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& o : report.occurrences) {
    auto& [sum, n] = acc[o.phoneme];
    sum += o.distance;
    ++n;
  }
  for (const auto& [phoneme, sn] : acc) {
    report.ranking.push_back({phoneme, sn.second, sn.first / static_cast<double>(sn.second)});
  }
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [](const auto& a, const auto& b) { return a.mean_distance > b.mean_distance; });
  return report;
}

inline constexpr std::string_view kReportHeader =
    "track_id\tphoneme\tstart_time\tend_time\tdistance\tmatched_reference_index";

// Tab-separated with a header line; one occurrence per row.
inline void write_report_tsv(std::ostream& os, std::span<const PhonemeReport> reports) {
  os << kReportHeader << '\n';
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(9);
  for (const auto& r : reports) {
    for (const auto& o : r.occurrences) {
      os << r.track_id << '\t' << o.phoneme << '\t' << o.start_time << '\t' << o.end_time
         << '\t' << o.distance << '\t' << o.matched_reference_index << '\n';
    }
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace poi

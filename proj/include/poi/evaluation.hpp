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

// Manifest-level batch driver.

#pragma once

#include <atomic>
#include <exception>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "poi/categories.hpp"
#include "poi/error.hpp"
#include "poi/io.hpp"
#include "poi/manifest.hpp"
#include "poi/metrics.hpp"
#include "poi/profile.hpp"
#include "poi/scoring.hpp"

namespace poi {

enum class Aggregation { Pooled, SpeakerMean };

inline Aggregation parse_aggregation(std::string_view s) {
  if (s == "pooled") return Aggregation::Pooled;
  if (s == "speaker-mean") return Aggregation::SpeakerMean;
  throw Error(ErrorCode::InvalidArgument, "unknown aggregation '" + std::string(s) + "'");
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// in index order is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto body = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) body(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Profiles keyed by speaker id, built from each speaker's reference rows in
// manifest order. Speakers without reference rows get no profile.
inline std::map<std::string, SpeakerProfile> enroll_speakers(
    const Manifest& manifest, const EnrollmentConfig& config, unsigned jobs = 1,
    std::map<std::string, EnrollmentLog>* logs = nullptr) {
  std::vector<std::string> speakers;
  std::map<std::string, std::vector<const ManifestRow*>> refs;
  for (const ManifestRow* row : manifest.select(Split::Reference)) {
    auto& list = refs[row->speaker_id];
    if (list.empty()) speakers.push_back(row->speaker_id);
    list.push_back(row);
  }
  std::vector<SpeakerProfile> built(speakers.size());
  std::vector<EnrollmentLog> built_logs(speakers.size());
  parallel_for(speakers.size(), jobs, [&](std::size_t i) {
    // Tracks past the cap are never read.
    std::vector<PafFile> pafs;
    std::size_t non_empty = 0, beyond_cap = 0;
    for (const ManifestRow* row : refs[speakers[i]]) {
      if (non_empty == config.max_reference_tracks) {
        ++beyond_cap;
        continue;
      }
      pafs.push_back(load_paf_file(row->path));
      non_empty += !pafs.back().frames.empty();
    }
    built[i] = build_profile(speakers[i], pafs, config, &built_logs[i]);
    built_logs[i].ignored_over_cap += beyond_cap;
    if (beyond_cap > 0) {
      warn("speaker '" + speakers[i] + "': reference cap of " +
           std::to_string(config.max_reference_tracks) + " reached; " +
           std::to_string(beyond_cap) + " later tracks ignored");
    }
  });
  std::map<std::string, SpeakerProfile> out;
  for (std::size_t i = 0; i < speakers.size(); ++i) {
    if (logs) (*logs)[speakers[i]] = built_logs[i];
    out.emplace(speakers[i], std::move(built[i]));
  }
  return out;
}

struct TrackResult {
  std::string speaker_id;
  std::string track_id;
  int label = 0;
  std::optional<double> score;
  std::string status = "ok";  // error name when unscorable
};

// Scores every test row once per requested category ([category][row]).
// Baseline mode ignores categories and yields a single row set.
inline std::vector<std::vector<TrackResult>> score_test_rows(
    const Manifest& manifest, const std::map<std::string, SpeakerProfile>& profiles,
    ScoreMode mode, const std::vector<CategoryName>& categories,
    const CategoryTable& table, unsigned jobs = 1) {
  const auto tests = manifest.select(Split::Test);
  const std::size_t n_sets = mode == ScoreMode::Baseline ? 1 : categories.size();
  std::vector<std::vector<TrackResult>> results(n_sets, std::vector<TrackResult>(tests.size()));

  parallel_for(tests.size(), jobs, [&](std::size_t i) {
    const ManifestRow& row = *tests[i];
    auto it = profiles.find(row.speaker_id);
    if (it == profiles.end()) {
      throw Error(ErrorCode::ManifestError, "line " + std::to_string(row.line) +
                                                ": no profile for speaker '" +
                                                row.speaker_id + "'");
    }
    const PafFile paf = load_paf_file(row.path);
    auto record = [&](std::size_t set, auto&& scorer) {
      TrackResult& r = results[set][i];
      r.speaker_id = row.speaker_id;
      r.track_id = row.track_id;
      r.label = row.label;
      try {
        r.score = scorer().score;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoScorablePhonemes && e.code() != ErrorCode::EmptyTrack) throw;
        r.status = std::string(error_name(e.code()));
      }
    };
    if (mode == ScoreMode::Baseline) {
      record(0, [&] { return score_track_baseline(paf, it->second); });
      return;
    }
    const auto segments = segment_phonemes(paf);
    for (std::size_t c = 0; c < categories.size(); ++c) {
      record(c, [&] {
        return score_track_category(segments, it->second, table.get(categories[c]), row.track_id);
      });
    }
  });
  return results;
}

inline std::vector<LabeledScore> scored_only(const std::vector<TrackResult>& results) {
  std::vector<LabeledScore> out;
  for (const auto& r : results) {
    if (r.score) out.push_back({*r.score, r.label, r.speaker_id, r.track_id});
  }
  return out;
}

// Pooled metrics always; per-speaker metrics when some speaker has both
// classes. Speaker-mean aggregation with no such speaker is an error.
inline EvalReport summarize(std::span<const LabeledScore> scores, Aggregation aggregation) {
  try {
    return per_speaker_aggregate(scores);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoValidSpeaker || aggregation == Aggregation::SpeakerMean) throw;
  }
  EvalReport r;
  r.roc_points = roc_curve(scores);
  r.auc = auc(r.roc_points);
  r.eer = eer(scores);
  for (const auto& s : scores) (s.label == 1 ? r.n_fake : r.n_bona_fide)++;
  r.speaker_mean_auc = std::numeric_limits<double>::quiet_NaN();
  r.speaker_mean_eer = std::numeric_limits<double>::quiet_NaN();
  warn("no speaker has both classes; speaker-mean metrics unavailable");
  return r;
}

// The (auc, eer) pair selected by the aggregation.
inline std::pair<double, double> headline(const EvalReport& r, Aggregation aggregation) {
  if (aggregation == Aggregation::SpeakerMean) return {r.speaker_mean_auc, r.speaker_mean_eer};
  return {r.auc, r.eer};
}

inline constexpr std::string_view kScoreDumpHeader = "speaker_id\ttrack_id\tlabel\tscore\tstatus";

// Scores printed with 17 significant digits so metrics recomputed from the
// dump reproduce the report.
inline void write_score_dump(std::ostream& os, const std::vector<TrackResult>& results) {
  os << kScoreDumpHeader << '\n';
  std::ostringstream num;
  num << std::setprecision(17);
  for (const auto& r : results) {
    os << r.speaker_id << '\t' << r.track_id << '\t' << r.label << '\t';
    if (r.score) {
      num.str("");
      num << *r.score;
      os << num.str();
    } else {
      os << "NA";
    }
    os << '\t' << r.status << '\n';
  }
}

inline std::vector<TrackResult> read_score_dump(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kScoreDumpHeader) {
    throw Error(ErrorCode::InvalidArgument, "score dump header missing");
  }
  std::vector<TrackResult> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_fields(line, '\t');
    if (f.size() != 5 || (f[2] != "0" && f[2] != "1")) {
      throw Error(ErrorCode::InvalidArgument,
                  "score dump line " + std::to_string(lineno) + " malformed");
    }
    TrackResult r;
    r.speaker_id = f[0];
    r.track_id = f[1];
    r.label = f[2] == "1";
    if (f[3] != "NA") {
      try {
        std::size_t used = 0;
        r.score = std::stod(f[3], &used);
        if (used != f[3].size()) throw std::invalid_argument(f[3]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument,
                    "score dump line " + std::to_string(lineno) + ": bad score");
      }
    }
    r.status = f[4];
    out.push_back(std::move(r));
  }
  return out;
}

// Analyzed speech (labelled frames) against total track duration.
struct DurationStats {
  std::string group;
  std::size_t tracks = 0;
  double total_seconds = 0.0;
  double phoneme_seconds = 0.0;

  double mean_total() const { return tracks ? total_seconds / tracks : 0.0; }
  double mean_phoneme() const { return tracks ? phoneme_seconds / tracks : 0.0; }
  double analyzed_fraction() const {
    return total_seconds > 0.0 ? phoneme_seconds / total_seconds : 0.0;
  }
};

inline std::pair<double, double> track_durations(const PafFile& paf) {
  std::size_t labelled = 0;
  for (const auto& f : paf.frames) labelled += !f.is_silence();
  return {paf.frame_to_seconds(paf.frames.size()), paf.frame_to_seconds(labelled)};
}

// Per-speaker rows followed by an "ALL" row.
inline std::vector<DurationStats> duration_stats(const Manifest& manifest) {
  std::vector<DurationStats> rows;
  DurationStats all{"ALL"};
  for (const auto& speaker : manifest.speakers()) {
    DurationStats s{speaker};
    for (const auto& row : manifest.rows) {
      if (row.speaker_id != speaker) continue;
      const auto [total, phon] = track_durations(load_paf_file(row.path));
      ++s.tracks;
      s.total_seconds += total;
      s.phoneme_seconds += phon;
    }
    all.tracks += s.tracks;
    all.total_seconds += s.total_seconds;
    all.phoneme_seconds += s.phoneme_seconds;
    rows.push_back(s);
  }
  rows.push_back(all);
  return rows;
}

}  // namespace poi

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

// Threshold-free detection metrics. Label 1 is fake, 0 bona fide; a track is
// called fake when its score is >= the threshold.

#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "poi/error.hpp"

namespace poi {

struct LabeledScore {
  double score = 0.0;
  int label = 0;
  std::string speaker_id;
  std::string track_id;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  bool operator==(const RocPoint&) const = default;
};

namespace detail {

// FPR/FNR after each distinct threshold, highest threshold first, preceded
// by the "reject everything" point (FPR 0, FNR 1).
struct SweepPoint {
  double fpr;
  double fnr;
  double tpr;
};

inline std::vector<SweepPoint> threshold_sweep(std::span<const LabeledScore> scores) {
  std::size_t n_pos = 0, n_neg = 0;
  for (const auto& s : scores) {
    if (s.label != 0 && s.label != 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "label " + std::to_string(s.label) + " for track '" + s.track_id +
                      "' is not 0 or 1");
    }
    if (!std::isfinite(s.score)) {
      throw Error(ErrorCode::InvalidArgument,
                  "non-finite score for track '" + s.track_id + "'");
    }
    (s.label == 1 ? n_pos : n_neg)++;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorCode::OneClassOnly,
                "need both classes, got " + std::to_string(n_neg) + " bona fide and " +
                    std::to_string(n_pos) + " fake");
  }
  std::vector<std::pair<double, int>> sorted;
  sorted.reserve(scores.size());
  for (const auto& s : scores) sorted.emplace_back(s.score, s.label);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  std::vector<SweepPoint> pts{{0.0, 1.0, 0.0}};
  std::size_t pos_ge = 0, neg_ge = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double t = sorted[i].first;
    for (; i < sorted.size() && sorted[i].first == t; ++i) {
      (sorted[i].second == 1 ? pos_ge : neg_ge)++;
    }
    pts.push_back({static_cast<double>(neg_ge) / nn,
                   static_cast<double>(n_pos - pos_ge) / np,
                   static_cast<double>(pos_ge) / np});
  }
  return pts;
}

}  // namespace detail

inline std::vector<RocPoint> roc_curve(std::span<const LabeledScore> scores) {
  std::vector<RocPoint> roc;
  for (const auto& p : detail::threshold_sweep(scores)) {
    RocPoint r{p.fpr, p.tpr};
    if (roc.empty() || roc.back() != r) roc.push_back(r);
  }
  return roc;
}

// Trapezoidal area; with the tie-grouped sweep this equals
// P(fake > bona fide) + P(tie) / 2.
inline double auc(std::span<const RocPoint> roc) {
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) / 2.0;
  }
  return area;
}

// Crossing of FPR and FNR, linearly interpolated between the two sweep
// points that bracket it.
inline double eer(std::span<const LabeledScore> scores) {
  const auto pts = detail::threshold_sweep(scores);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double g = pts[k].fpr - pts[k].fnr;
    if (g < 0.0) continue;
    if (g == 0.0) return pts[k].fpr;
    const double g_prev = pts[k - 1].fpr - pts[k - 1].fnr;
    const double a = -g_prev / (g - g_prev);
    return pts[k - 1].fpr + a * (pts[k].fpr - pts[k - 1].fpr);
  }
  return pts.back().fpr;  // unreachable: the last point has FPR 1, FNR 0
}

struct SpeakerMetrics {
  std::string speaker_id;
  double auc = 0.0;
  double eer = 0.0;
  std::size_t n_bona_fide = 0;
  std::size_t n_fake = 0;
};

struct EvalReport {
  // pooled over every score
  double auc = 0.0;
  double eer = 0.0;
  std::vector<RocPoint> roc_points;
  std::size_t n_bona_fide = 0;
  std::size_t n_fake = 0;
  // unweighted mean over speakers that have both classes
  std::vector<SpeakerMetrics> per_speaker;
  double speaker_mean_auc = 0.0;
  double speaker_mean_eer = 0.0;
  std::vector<std::string> excluded_speakers;
};

inline EvalReport per_speaker_aggregate(std::span<const LabeledScore> scores) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<LabeledScore>> by_speaker;
  for (const auto& s : scores) {
    auto [it, inserted] = by_speaker.try_emplace(s.speaker_id);
    if (inserted) order.push_back(s.speaker_id);
    it->second.push_back(s);
  }

  EvalReport report;
  for (const auto& spk : order) {
    const auto& group = by_speaker[spk];
    SpeakerMetrics m;
    m.speaker_id = spk;
    for (const auto& s : group) (s.label == 1 ? m.n_fake : m.n_bona_fide)++;
    if (m.n_fake == 0 || m.n_bona_fide == 0) {
      report.excluded_speakers.push_back(spk);
      warn("speaker '" + spk + "' lacks " + (m.n_fake == 0 ? "fake" : "bona fide") +
           " tracks; excluded from per-speaker metrics");
      continue;
    }
    m.auc = auc(roc_curve(group));
    m.eer = eer(group);
    report.speaker_mean_auc += m.auc;
    report.speaker_mean_eer += m.eer;
    report.per_speaker.push_back(std::move(m));
  }
  if (report.per_speaker.empty()) {
    throw Error(ErrorCode::NoValidSpeaker, "no speaker has both bona fide and fake tracks");
  }
  const double n = static_cast<double>(report.per_speaker.size());
  report.speaker_mean_auc /= n;
  report.speaker_mean_eer /= n;

  report.roc_points = roc_curve(scores);
  report.auc = auc(report.roc_points);
  report.eer = eer(scores);
  for (const auto& s : scores) (s.label == 1 ? report.n_fake : report.n_bona_fide)++;
  return report;
}

// EER change in percentage points; negative means the perturbation helped.
inline double delta_eer(std::span<const LabeledScore> clean,
                        std::span<const LabeledScore> perturbed) {
  return 100.0 * (eer(perturbed) - eer(clean));
}

inline void write_eval_report(std::ostream& os, const EvalReport& r) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << "pooled_auc\t" << r.auc << '\n'
     << "pooled_eer\t" << r.eer << '\n'
     << "n_bona_fide\t" << r.n_bona_fide << '\n'
     << "n_fake\t" << r.n_fake << '\n'
     << "speaker_mean_auc\t" << r.speaker_mean_auc << '\n'
     << "speaker_mean_eer\t" << r.speaker_mean_eer << '\n'
     << "n_speakers\t" << r.per_speaker.size() << '\n'
     << "excluded_speakers\t";
  for (std::size_t i = 0; i < r.excluded_speakers.size(); ++i) {
    os << (i ? "," : "") << r.excluded_speakers[i];
  }
  os << "\n\n[per_speaker]\nspeaker_id\tauc\teer\tn_bona_fide\tn_fake\n";
  for (const auto& m : r.per_speaker) {
    os << m.speaker_id << '\t' << m.auc << '\t' << m.eer << '\t' << m.n_bona_fide << '\t'
       << m.n_fake << '\n';
  }
  os << "\n[roc]\nfpr\ttpr\n";
  for (const auto& p : r.roc_points) os << p.fpr << '\t' << p.tpr << '\n';
  os.flags(flags);
  os.precision(prec);
}

}  // namespace poi

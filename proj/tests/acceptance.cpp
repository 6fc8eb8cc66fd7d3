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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Tolerances and sizes are fixed here and nowhere else.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "poi/poi.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace {

using namespace poi;
using testing::Rng;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------- 1

constexpr double kDistanceTol = 1e-9;
constexpr double kDistanceBudgetSeconds = 10.0;

Outcome distance_kernel() {
  Rng rng(101);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  double worst = 0.0;
  std::size_t bad_range = 0, bad_scale = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t d = 1 + rng() % 64;
    const std::size_t n = 1 + rng() % 1000;
    const Vector q = testing::random_vector(rng, d);
    std::vector<Vector> set;
    for (std::size_t k = 0; k < n; ++k) set.push_back(testing::random_vector(rng, d));

    for (const auto& v : set) {
      const double got = cosine_distance(q, v);
      worst = std::max(worst, std::abs(got - static_cast<double>(oracle::cosine(q, v))));
      if (!(got >= 0.0 && got <= 2.0)) ++bad_range;
    }
    const auto nn = phoneme_min_distance(q, set);
    const auto want = oracle::min_cosine(q, set);
    worst = std::max(worst, std::abs(nn.distance - want.first));
    worst = std::max(worst,
                     std::abs(static_cast<double>(oracle::cosine(q, set[nn.index])) - want.first));

    // Positive rescaling of both sides leaves the distance alone.
    const double a = scale(rng), b = scale(rng);
    Vector qa = q, vb = set[0];
    for (auto& x : qa) x = static_cast<float>(x * a);
    for (auto& x : vb) x = static_cast<float>(x * b);
    const double base = static_cast<double>(oracle::cosine(qa, vb));
    if (std::abs(cosine_distance(qa, vb) - base) > kDistanceTol ||
        std::abs(cosine_distance(q, set[0]) - base) > 1e-6) {
      ++bad_scale;
    }
  }
  return {worst <= kDistanceTol && bad_range == 0 && bad_scale == 0,
          fmt("max |err| %.3g over 1000 instances; range violations %.0f; scale violations %.0f",
              worst, static_cast<double>(bad_range), static_cast<double>(bad_scale))};
}

// ---------------------------------------------------------------- 2

Outcome self_enrollment() {
  Rng rng(202);
  const auto inventory = CategoryTable::builtin().inventory();
  std::size_t checked = 0, nonzero = 0;
  for (int s = 0; s < 20; ++s) {
    const auto speaker = testing::make_cluster_speaker(rng, inventory, 32);
    std::vector<PafFile> refs;
    for (int i = 0; i < 5; ++i) {
      refs.push_back(testing::make_cluster_track(rng, speaker, {}, "r" + std::to_string(i)));
    }
    const SpeakerProfile p = build_profile("s" + std::to_string(s), refs);
    for (const auto& r : refs) {
      checked += 2;
      nonzero += score_track_phoneme(segment_phonemes(r), p).score != 0.0;
      nonzero += score_track_baseline(r, p).score != 0.0;
    }
  }
  return {nonzero == 0, fmt("%.0f of %.0f self-scores exactly 0.0", checked - nonzero, checked)};
}

// ---------------------------------------------------------------- 3

constexpr double kSeparatedEerMax = 0.02;
constexpr double kChanceEerLow = 0.4, kChanceEerHigh = 0.6;
constexpr double kSeparationBudgetSeconds = 30.0;

// 100 genuine plus 100 fake test tracks, fakes shifted by `shift` sigma.
// With a noise stream, silence frames get extra noise drawn from it; the
// tracks themselves depend only on `rng`.
std::vector<LabeledScore> cluster_scores(Rng& rng, const testing::ClusterSpeaker& speaker,
                                         const SpeakerProfile& profile, double shift,
                                         ScoreMode mode, Rng* noise = nullptr,
                                         double silence_noise = 0.0) {
  std::vector<LabeledScore> out;
  for (int i = 0; i < 200; ++i) {
    const int label = i % 2;
    testing::ClusterTrackSpec spec;
    spec.shift = label ? shift : 0.0;
    PafFile t = testing::make_cluster_track(rng, speaker, spec, "t" + std::to_string(i));
    if (noise) testing::perturb_silence(*noise, t, silence_noise);
    const double s = mode == ScoreMode::Phoneme
                         ? score_track_phoneme(segment_phonemes(t), profile).score
                         : score_track_baseline(t, profile).score;
    out.push_back({s, label, profile.speaker_id, t.track_id});
  }
  return out;
}

Outcome synthetic_separation() {
  Rng rng(303);
  const auto speaker = testing::make_cluster_speaker(rng, CategoryTable::builtin().inventory(), 32);
  std::vector<PafFile> refs;
  for (int i = 0; i < 10; ++i) refs.push_back(testing::make_cluster_track(rng, speaker, {}, "r"));
  const SpeakerProfile p = build_profile("spk", refs);
  const double separated = eer(cluster_scores(rng, speaker, p, 3.0, ScoreMode::Phoneme));
  const double chance = eer(cluster_scores(rng, speaker, p, 0.0, ScoreMode::Phoneme));
  return {separated <= kSeparatedEerMax && chance >= kChanceEerLow && chance <= kChanceEerHigh,
          fmt("EER %.4f at 3 sigma (<= 0.02), %.4f at 0 sigma (in [0.4, 0.6])", separated,
              chance)};
}

// ---------------------------------------------------------------- 4

constexpr double kMetricTol = 1e-12;

Outcome metrics_oracle() {
  Rng rng(404);
  std::normal_distribution<double> z;
  double worst_auc = 0, worst_eer = 0;
  std::size_t roc_mismatch = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<LabeledScore> s;
    const std::size_t n = 2 + rng() % 1000;
    const bool coarse = i % 4 == 0;  // force ties
    for (std::size_t k = 0; k < n; ++k) {
      const int label = k < 2 ? static_cast<int>(k) : static_cast<int>(rng() % 2);
      double v = z(rng) + label;
      if (coarse) v = std::round(v * 3) / 3;
      s.push_back({v, label, "s", {}});
    }
    const auto roc = roc_curve(s);
    std::set<std::pair<double, double>> pts;
    for (const auto& p : roc) pts.insert({p.fpr, p.tpr});
    roc_mismatch += pts != oracle::roc_point_set(s);
    worst_auc = std::max(worst_auc, std::abs(auc(roc) - oracle::pairwise_auc(s)));
    worst_eer = std::max(worst_eer, std::abs(eer(s) - oracle::eer(s)));
  }
  std::vector<LabeledScore> w;
  for (double r : {0.1, 0.2, 0.3, 0.4}) w.push_back({r, 0, "s", {}});
  for (double f : {0.35, 0.5, 0.6, 0.7}) w.push_back({f, 1, "s", {}});
  const double w_auc = auc(roc_curve(w)), w_eer = eer(w);
  const bool worked = std::abs(w_auc - 0.9375) <= kMetricTol && std::abs(w_eer - 0.25) <= kMetricTol;
  return {worst_auc <= kMetricTol && worst_eer <= kMetricTol && roc_mismatch == 0 && worked,
          fmt("max AUC err %.3g, max EER err %.3g on 100 sets; ", worst_auc, worst_eer) +
              fmt("worked example AUC %.6f EER %.6f", w_auc, w_eer)};
}

// ---------------------------------------------------------------- 5

constexpr double kSnrTolDb = 0.1;
constexpr double kMuLawMinSnrDb = 30.0;

Outcome perturbation_accuracy() {
  // 10 s of a speech-like signal: a few harmonics under a slow envelope.
  AudioTrack x;
  for (int i = 0; i < 160000; ++i) {
    const double t = i / 16000.0;
    const double env = 0.6 + 0.4 * std::sin(2 * std::numbers::pi * 3 * t);
    x.samples.push_back(env * (std::sin(2 * std::numbers::pi * 180 * t) +
                               0.5 * std::sin(2 * std::numbers::pi * 360 * t + 1) +
                               0.25 * std::sin(2 * std::numbers::pi * 900 * t + 2)));
  }
  x = normalize(x);
  double worst = 0;
  for (double target : {25.0, 20.0, 15.0, 10.0}) {
    worst = std::max(worst, std::abs(measure_snr(x, add_awgn(x, target, 17)) - target));
  }

  AudioTrack sine;
  for (int i = 0; i < 160000; ++i) {
    sine.samples.push_back(std::sin(2 * std::numbers::pi * 440 * i / 16000.0));
  }
  const double mulaw_snr = measure_snr(sine, mulaw_roundtrip(sine));

  const bool deterministic =
      write_wav(add_awgn(x, 15, 99)) == write_wav(add_awgn(x, 15, 99)) &&
      write_wav(mulaw_roundtrip(x)) == write_wav(mulaw_roundtrip(x));
  return {worst <= kSnrTolDb && mulaw_snr > kMuLawMinSnrDb && deterministic,
          fmt("AWGN max |SNR err| %.4f dB; mu-law sine SNR %.2f dB; deterministic %.0f", worst,
              mulaw_snr, deterministic)};
}

// ---------------------------------------------------------------- 6

bool is_parse_error(ErrorCode c) {
  return c == ErrorCode::BadMagic || c == ErrorCode::UnsupportedVersion ||
         c == ErrorCode::TruncatedFile || c == ErrorCode::DimMismatch ||
         c == ErrorCode::InvalidPhonemeId || c == ErrorCode::InvalidInventory ||
         c == ErrorCode::TooManyPhonemes || c == ErrorCode::InvalidProfile;
}

// Every strict prefix must fail with a named parse error.
template <typename Load>
std::size_t bad_truncations(const std::vector<std::uint8_t>& bytes, Load load) {
  std::size_t bad = 0;
  for (std::size_t len = 0; len < bytes.size(); ++len) {
    try {
      load(std::span<const std::uint8_t>(bytes.data(), len));
      ++bad;
    } catch (const Error& e) {
      bad += !is_parse_error(e.code());
    } catch (...) {
      ++bad;
    }
  }
  return bad;
}

Outcome format_roundtrips() {
  Rng rng(606);
  std::size_t paf_bad = 0, prof_bad = 0, trunc_bad = 0, prefixes = 0;
  for (int i = 0; i < 100; ++i) {
    const PafFile paf = testing::random_paf(rng, 60, 12);
    const auto a = write_paf(paf);
    const auto b = write_paf(read_paf(a));
    paf_bad += a != b;
    const SpeakerProfile p = testing::random_profile(rng, 12);
    const auto c = save_profile(p);
    const auto d = save_profile(load_profile(c));
    prof_bad += c != d;
    if (i < 25) {
      trunc_bad += bad_truncations(a, [](auto s) { return read_paf(s); });
      trunc_bad += bad_truncations(c, [](auto s) { return load_profile(s); });
      prefixes += a.size() + c.size();
    }
  }
  return {paf_bad == 0 && prof_bad == 0 && trunc_bad == 0,
          fmt("PAF mismatches %.0f/100, profile mismatches %.0f/100, ", paf_bad, prof_bad) +
              fmt("truncations without a named error %.0f of %.0f", trunc_bad, prefixes)};
}

// ---------------------------------------------------------------- 7

Outcome category_partition() {
  Rng rng(707);
  const auto table = CategoryTable::builtin();
  std::size_t count_bad = 0, oracle_bad = 0, tracks = 0;
  for (int s = 0; s < 10; ++s) {
    const auto speaker = testing::make_cluster_speaker(rng, table.inventory(), 16);
    std::vector<PafFile> refs;
    for (int i = 0; i < 3; ++i) refs.push_back(testing::make_cluster_track(rng, speaker, {}, "r"));
    const SpeakerProfile p = build_profile("s", refs);
    for (int t = 0; t < 10; ++t, ++tracks) {
      testing::ClusterTrackSpec spec;
      spec.segments = 5 + rng() % 60;
      spec.shift = static_cast<double>(rng() % 4);
      const auto segs = segment_phonemes(testing::make_cluster_track(rng, speaker, spec, "t"));
      const std::size_t all = score_track_category(segs, p, table.get(CategoryName::All)).n_phonemes;
      std::size_t sum = 0;
      for (CategoryName c : kPartitionCategories) {
        const auto& cat = table.get(c);
        std::vector<PhonemeSegment> kept;
        for (const auto& seg : segs) {
          if (cat.members.count(seg.phoneme)) kept.push_back(seg);
        }
        std::optional<double> got, want;
        try {
          const TrackScore ts = score_track_category(segs, p, cat);
          got = ts.score;
          sum += ts.n_phonemes;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoScorablePhonemes) throw;
        }
        try {
          want = score_track_phoneme(kept, p).score;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoScorablePhonemes) throw;
        }
        oracle_bad += got != want;
      }
      count_bad += sum != all;
    }
  }
  return {count_bad == 0 && oracle_bad == 0,
          fmt("%.0f tracks; count partition violations %.0f; oracle mismatches %.0f",
              static_cast<double>(tracks), count_bad, oracle_bad)};
}

// ---------------------------------------------------------------- 8

// Noise on non-phoneme frames, per dimension, in units of the feature scale
// (cluster centers have unit variance per dimension).
constexpr double kSilenceNoise = 2.0;

Outcome robustness_direction() {
  Rng rng(808);
  const auto speaker = testing::make_cluster_speaker(rng, CategoryTable::builtin().inventory(), 32);
  std::vector<PafFile> refs;
  for (int i = 0; i < 10; ++i) refs.push_back(testing::make_cluster_track(rng, speaker, {}, "r"));
  const SpeakerProfile p = build_profile("spk", refs);

  auto delta = [&](ScoreMode mode) {
    // Same seed for both conditions: identical tracks, noise added or not.
    const std::uint64_t seed = rng();
    Rng clean_rng(seed), noisy_rng(seed), noise_rng(rng());
    const auto clean = cluster_scores(clean_rng, speaker, p, 1.5, mode);
    const auto noisy = cluster_scores(noisy_rng, speaker, p, 1.5, mode, &noise_rng, kSilenceNoise);
    return std::make_pair(eer(clean), delta_eer(clean, noisy));
  };
  const auto [phon_eer, phon_delta] = delta(ScoreMode::Phoneme);
  const auto [base_eer, base_delta] = delta(ScoreMode::Baseline);
  return {base_delta > phon_delta && phon_delta >= 0.0,
          fmt("clean EER phoneme %.3f baseline %.3f; ", phon_eer, base_eer) +
              fmt("delta EER (pp) phoneme %.2f baseline %.2f", phon_delta, base_delta)};
}

}  // namespace

int main() {
  // Library warnings are not part of the acceptance output.
  poi::warning_sink() = [](std::string_view) {};

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_seconds;  // 0: none
  };
  const Criterion criteria[] = {
      {"distance-kernel-oracle", distance_kernel, kDistanceBudgetSeconds},
      {"self-enrollment-zero", self_enrollment, 0},
      {"synthetic-separation", synthetic_separation, kSeparationBudgetSeconds},
      {"metrics-oracle", metrics_oracle, 0},
      {"perturbation-accuracy", perturbation_accuracy, 0},
      {"format-roundtrips", format_roundtrips, 0},
      {"category-partition", category_partition, 0},
      {"robustness-direction", robustness_direction, 0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s budget", c.budget_seconds);
    }
    failures += !o.pass;
    std::printf("[%s] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}

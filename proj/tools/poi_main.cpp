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

// poi: enroll, score, evaluate, perturb, inspect, stats.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "poi/poi.hpp"

namespace fs = std::filesystem;

namespace {

using poi::ErrorCode;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ManifestError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnknownCategory:
    case ErrorCode::EmptyReferenceSet:
    case ErrorCode::WrongMode:
      return 2;
    case ErrorCode::IoError:
    case ErrorCode::BadMagic:
    case ErrorCode::UnsupportedVersion:
    case ErrorCode::TruncatedFile:
    case ErrorCode::InvalidPhonemeId:
    case ErrorCode::InvalidInventory:
    case ErrorCode::TooManyPhonemes:
    case ErrorCode::InvalidProfile:
      return 3;
    case ErrorCode::NoScorablePhonemes:
    case ErrorCode::EmptyTrack:
    case ErrorCode::EmptyEntry:
    case ErrorCode::TrackWithZeroFrames:
      return 4;
    case ErrorCode::DimMismatch:
    case ErrorCode::ZeroVector:
      return 5;
    case ErrorCode::OneClassOnly:
    case ErrorCode::NoValidSpeaker:
      return 6;
    case ErrorCode::NotRiff:
    case ErrorCode::UnsupportedCodec:
    case ErrorCode::UnsupportedBitDepth:
    case ErrorCode::SampleRateMismatch:
    case ErrorCode::LengthMismatch:
      return 7;
    case ErrorCode::DegenerateSignal:
    case ErrorCode::SilentSignal:
      return 8;
    case ErrorCode::EncoderMissing:
      return 9;
    case ErrorCode::EncoderFailed:
    case ErrorCode::DurationDrift:
      return 10;
  }
  return 1;
}

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

poi::CategoryTable load_table(const std::string& path) {
  if (path.empty()) return poi::CategoryTable::builtin();
  std::ifstream in(path);
  if (!in) throw poi::Error(ErrorCode::IoError, "cannot open category file " + path);
  return poi::CategoryTable::parse(in);
}

void write_text(const fs::path& p, const std::string& text) { poi::write_file_atomic(p, text); }

// ---------------------------------------------------------------- enroll

struct EnrollArgs {
  std::string manifest;
  std::string out_dir;
  std::size_t max_refs = 100;
  unsigned jobs = 1;
  std::string categories_file;
};

int cmd_enroll(const EnrollArgs& a) {
  const poi::Manifest manifest = poi::load_manifest(a.manifest);
  if (manifest.select(poi::Split::Reference).empty()) {
    throw poi::Error(ErrorCode::ManifestError, "manifest has no reference rows");
  }
  poi::EnrollmentConfig config;
  config.max_reference_tracks = a.max_refs;
  std::map<std::string, poi::EnrollmentLog> logs;
  const auto profiles = poi::enroll_speakers(manifest, config, a.jobs, &logs);
  const poi::PhonemeInventory inventory = load_table(a.categories_file).inventory();

  // Everything is built before the first write, so a failure above leaves
  // no files behind. Each file lands via rename.
  fs::create_directories(a.out_dir);
  std::ostringstream coverage;
  coverage << "speaker_id\tn_reference_tracks\tskipped_empty\tignored_over_cap\tcoverage\tmissing\n";
  for (const auto& speaker : manifest.speakers()) {
    auto it = profiles.find(speaker);
    if (it == profiles.end()) continue;  // test-only speaker
    const poi::SpeakerProfile& p = it->second;
    const poi::EnrollmentLog& log = logs.at(speaker);
    poi::write_file_atomic(fs::path(a.out_dir) / (speaker + ".poip"), poi::save_profile(p));

    if (log.ignored_over_cap > 0) {
      // Loading stopped after the used and skipped rows.
      const auto refs = manifest.select(poi::Split::Reference);
      std::size_t seen = 0;
      for (const poi::ManifestRow* row : refs) {
        if (row->speaker_id != speaker) continue;
        if (seen++ == log.used_tracks + log.skipped_empty_tracks) {
          std::cerr << "poi: " << speaker << ": cap " << a.max_refs << " reached; track '"
                    << row->track_id << "' (manifest line " << row->line
                    << ") and later references ignored\n";
          break;
        }
      }
    }
    const poi::CoverageReport cov = poi::profile_coverage(p, inventory);
    if (!cov.missing.empty()) {
      std::string list;
      for (const auto& m : cov.missing) list += (list.empty() ? "" : " ") + m;
      poi::warn("speaker '" + speaker + "' has no reference occurrences of " +
                std::to_string(cov.missing.size()) + " phonemes: " + list);
    }
    coverage << speaker << '\t' << p.n_reference_tracks << '\t' << log.skipped_empty_tracks
             << '\t' << log.ignored_over_cap << '\t' << fmt17(cov.coverage) << '\t';
    for (std::size_t i = 0; i < cov.missing.size(); ++i) {
      coverage << (i ? "," : "") << cov.missing[i];
    }
    coverage << '\n';
    std::cout << speaker << '\t' << p.n_reference_tracks << " references\n";
  }
  write_text(fs::path(a.out_dir) / "coverage.tsv", coverage.str());
  return 0;
}

// ---------------------------------------------------------------- score

struct ScoreArgs {
  std::string profile;
  std::string paf;
  std::string mode = "phoneme";
  std::string category = "All";
  std::string categories_file;
  std::string report;
  std::optional<double> threshold;
  std::size_t top = 5;
};

int cmd_score(const ScoreArgs& a) {
  const poi::ScoreMode mode = poi::parse_mode(a.mode);
  const poi::CategoryName category = poi::parse_category(a.category);
  if (mode == poi::ScoreMode::Baseline && category != poi::CategoryName::All) {
    throw poi::Error(ErrorCode::InvalidArgument, "categories apply to phoneme mode only");
  }
  if (mode == poi::ScoreMode::Baseline && !a.report.empty()) {
    throw poi::Error(ErrorCode::WrongMode, "per-phoneme report needs phoneme mode");
  }
  const poi::SpeakerProfile profile = poi::load_profile_file(a.profile);
  const poi::PafFile paf = poi::load_paf_file(a.paf);
  const poi::CategoryTable table = load_table(a.categories_file);

  poi::TrackScore s;
  if (mode == poi::ScoreMode::Baseline) {
    s = poi::score_track_baseline(paf, profile);
    s.track_id = paf.track_id;
  } else {
    s = poi::score_track_category(poi::segment_phonemes(paf), profile, table.get(category),
                                  paf.track_id);
  }
  std::cout << "track_id\t" << s.track_id << '\n'
            << "speaker_id\t" << profile.speaker_id << '\n'
            << "mode\t" << poi::mode_name(mode) << '\n';
  if (mode == poi::ScoreMode::Phoneme) {
    std::cout << "category\t" << poi::category_name(category) << '\n'
              << "n_phonemes\t" << s.n_phonemes << '\n'
              << "n_skipped\t" << s.skipped_phonemes.size() << '\n';
  }
  std::cout << "score\t" << fmt17(s.score) << '\n';
  if (a.threshold) {
    std::cout << "threshold\t" << fmt17(*a.threshold) << '\n'
              << "decision\t" << (s.score >= *a.threshold ? "fake" : "authentic") << '\n';
  }
  if (!s.skipped_phonemes.empty()) {
    std::set<std::string> labels;
    for (const auto& k : s.skipped_phonemes) labels.insert(k.phoneme);
    std::string list;
    for (const auto& l : labels) list += (list.empty() ? "" : " ") + l;
    poi::warn(std::to_string(s.skipped_phonemes.size()) +
              " occurrences skipped, phonemes absent from profile: " + list);
  }
  if (!a.report.empty()) {
    const poi::PhonemeReport report = poi::per_phoneme_report(s);
    std::ostringstream tsv;
    poi::write_report_tsv(tsv, std::span(&report, 1));
    if (a.report == "-") {
      std::cout << tsv.str();
    } else {
      write_text(a.report, tsv.str());
    }
    for (const auto& agg : report.top(a.top)) {
      std::cout << "top\t" << agg.phoneme << '\t' << fmt17(agg.mean_distance) << '\t'
                << agg.occurrences << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string manifest;
  std::string out_dir;
  std::string mode = "phoneme";
  std::string category = "All";
  bool sweep = false;
  std::string categories_file;
  std::string aggregation = "pooled";
  std::string perturbed_manifest;
  std::string from_scores;
  std::size_t max_refs = 100;
  unsigned jobs = 1;
};

std::string dump_text(const std::vector<poi::TrackResult>& r) {
  std::ostringstream os;
  poi::write_score_dump(os, r);
  return os.str();
}

void report_unscored(const std::vector<poi::TrackResult>& results, const std::string& what) {
  std::size_t n = 0;
  for (const auto& r : results) n += !r.score.has_value();
  if (n > 0) {
    poi::warn(what + ": " + std::to_string(n) + " tracks unscorable; listed in the score dump");
  }
}

std::string metrics_text(const poi::EvalReport& r, const std::string& mode,
                         const std::string& category, const std::string& aggregation) {
  std::ostringstream os;
  const auto [h_auc, h_eer] = poi::headline(r, poi::parse_aggregation(aggregation));
  os << "mode\t" << mode << '\n'
     << "category\t" << category << '\n'
     << "aggregation\t" << aggregation << '\n'
     << std::setprecision(17) << "auc\t" << h_auc << '\n'
     << "eer\t" << h_eer << '\n';
  poi::write_eval_report(os, r);
  return os.str();
}

int cmd_evaluate(const EvaluateArgs& a) {
  const poi::Aggregation aggregation = poi::parse_aggregation(a.aggregation);
  const poi::ScoreMode mode = poi::parse_mode(a.mode);
  const fs::path out(a.out_dir);

  if (!a.from_scores.empty()) {
    std::ifstream in(a.from_scores);
    if (!in) throw poi::Error(ErrorCode::IoError, "cannot open " + a.from_scores);
    const auto results = poi::read_score_dump(in);
    const auto scores = poi::scored_only(results);
    const poi::EvalReport r = poi::summarize(scores, aggregation);
    fs::create_directories(out);
    write_text(out / "metrics.txt", metrics_text(r, "from-scores", "-", a.aggregation));
    const auto [h_auc, h_eer] = poi::headline(r, aggregation);
    std::cout << "auc\t" << fmt17(h_auc) << "\neer\t" << fmt17(h_eer) << '\n';
    return 0;
  }

  if (a.manifest.empty()) {
    throw poi::Error(ErrorCode::InvalidArgument, "--manifest is required");
  }
  if (mode == poi::ScoreMode::Baseline && (a.sweep || a.category != "All")) {
    throw poi::Error(ErrorCode::InvalidArgument, "categories apply to phoneme mode only");
  }
  std::vector<poi::CategoryName> categories;
  if (a.sweep) {
    categories.assign(poi::kAllCategories.begin(), poi::kAllCategories.end());
  } else {
    categories.push_back(poi::parse_category(a.category));
  }
  const poi::CategoryTable table = load_table(a.categories_file);
  const poi::Manifest manifest = poi::load_manifest(a.manifest);
  std::optional<poi::Manifest> perturbed;
  if (!a.perturbed_manifest.empty()) perturbed = poi::load_manifest(a.perturbed_manifest);

  poi::EnrollmentConfig config;
  config.max_reference_tracks = a.max_refs;
  const auto profiles = poi::enroll_speakers(manifest, config, a.jobs);
  const auto sets = poi::score_test_rows(manifest, profiles, mode, categories, table, a.jobs);

  fs::create_directories(out);
  const std::string mode_s(poi::mode_name(mode));

  // Headline set: the single category, or All in a sweep.
  const auto& main = sets[0];
  const std::string main_cat(poi::category_name(categories[0]));
  report_unscored(main, main_cat);
  write_text(out / "scores.tsv", dump_text(main));
  const auto main_scores = poi::scored_only(main);
  const poi::EvalReport report = poi::summarize(main_scores, aggregation);
  write_text(out / "metrics.txt", metrics_text(report, mode_s, main_cat, a.aggregation));
  const auto [h_auc, h_eer] = poi::headline(report, aggregation);
  std::cout << "auc\t" << fmt17(h_auc) << "\neer\t" << fmt17(h_eer) << '\n';

  if (a.sweep) {
    std::ostringstream tsv;
    tsv << "category\tn_scored\tn_unscored\tauc\teer\tspeaker_mean_auc\tspeaker_mean_eer\n";
    for (std::size_t c = 0; c < sets.size(); ++c) {
      const std::string name(poi::category_name(categories[c]));
      const auto scores = poi::scored_only(sets[c]);
      write_text(out / ("scores_" + name + ".tsv"), dump_text(sets[c]));
      tsv << name << '\t' << scores.size() << '\t' << sets[c].size() - scores.size();
      try {
        const poi::EvalReport r = poi::summarize(scores, poi::Aggregation::Pooled);
        tsv << '\t' << fmt17(r.auc) << '\t' << fmt17(r.eer) << '\t' << fmt17(r.speaker_mean_auc)
            << '\t' << fmt17(r.speaker_mean_eer) << '\n';
      } catch (const poi::Error& e) {
        if (e.code() != ErrorCode::OneClassOnly) throw;
        poi::warn(name + ": metrics uncomputable (" + e.what() + ")");
        tsv << "\tNA\tNA\tNA\tNA\n";
      }
    }
    write_text(out / "categories.tsv", tsv.str());
  }

  if (perturbed) {
    const auto psets =
        poi::score_test_rows(*perturbed, profiles, mode, {categories[0]}, table, a.jobs);
    report_unscored(psets[0], "perturbed");
    write_text(out / "perturbed_scores.tsv", dump_text(psets[0]));
    const auto pscores = poi::scored_only(psets[0]);
    const poi::EvalReport pr = poi::summarize(pscores, aggregation);
    const double clean_eer = poi::headline(report, aggregation).second;
    const double pert_eer = poi::headline(pr, aggregation).second;
    const double delta = aggregation == poi::Aggregation::Pooled
                             ? poi::delta_eer(main_scores, pscores)
                             : 100.0 * (pert_eer - clean_eer);
    std::ostringstream os;
    os << "aggregation\t" << a.aggregation << "\nclean_eer\t" << fmt17(clean_eer)
       << "\nperturbed_eer\t" << fmt17(pert_eer) << "\ndelta_eer_pp\t" << fmt17(delta) << '\n';
    write_text(out / "robustness.txt", os.str());
    write_text(out / "perturbed_metrics.txt", metrics_text(pr, mode_s, main_cat, a.aggregation));
    std::cout << "delta_eer_pp\t" << fmt17(delta) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- perturb

struct PerturbArgs {
  std::string in;
  std::string out;
  std::optional<double> awgn_snr;
  std::optional<std::uint64_t> seed;
  bool mulaw = false;
  bool mp3 = false;
  int bitrate = 128;
  std::string encoder;
  bool allow_any_rate = false;
};

int cmd_perturb(const PerturbArgs& a) {
  const int kinds = a.awgn_snr.has_value() + a.mulaw + a.mp3;
  if (kinds != 1) {
    throw poi::Error(ErrorCode::InvalidArgument, "choose exactly one of --awgn-snr, --mulaw, --mp3");
  }
  if (a.awgn_snr && !a.seed) {
    throw poi::Error(ErrorCode::InvalidArgument, "--awgn-snr requires an explicit --seed");
  }
  const poi::AudioTrack clean =
      poi::read_wav(poi::read_file(a.in), {16000, a.allow_any_rate});

  nlohmann::ordered_json meta;
  meta["input"] = a.in;
  meta["output"] = a.out;
  poi::AudioTrack out;
  if (a.awgn_snr) {
    out = poi::add_awgn(clean, *a.awgn_snr, *a.seed);
    meta["kind"] = "awgn";
    meta["snr_db"] = *a.awgn_snr;
    meta["seed"] = *a.seed;
  } else if (a.mulaw) {
    out = poi::mulaw_roundtrip(clean);
    meta["kind"] = "mulaw";
    meta["mu"] = poi::kMuLaw;
    meta["bits"] = 8;
  } else {
    poi::Mp3Options opts;
    opts.encoder = a.encoder;
    opts.bitrate_kbps = a.bitrate;
    const fs::path encoder = poi::resolve_mp3_encoder(opts);
    out = poi::mp3_roundtrip_external(clean, opts);
    meta["kind"] = "mp3";
    meta["bitrate_kbps"] = a.bitrate;
    meta["encoder"] = encoder.string();
  }
  meta["sample_rate"] = clean.sample_rate;
  meta["samples"] = clean.samples.size();
  const double snr = poi::measure_snr(clean, out);
  if (snr == poi::kSnrMax) {
    meta["measured_snr_db"] = nullptr;
  } else {
    meta["measured_snr_db"] = snr;
  }
  poi::write_file_atomic(a.out, poi::write_wav(out));
  poi::write_file_atomic(a.out + ".json", meta.dump(2) + "\n");
  std::cout << "measured_snr_db\t" << (snr == poi::kSnrMax ? "inf" : fmt17(snr)) << '\n';
  return 0;
}

// ---------------------------------------------------------------- inspect

int cmd_inspect(const std::string& path, std::size_t max_frames) {
  const auto bytes = poi::read_file(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "POIP", 4) == 0) {
    const poi::SpeakerProfile p = poi::load_profile_file(path);
    std::cout << "type\tprofile\nspeaker_id\t" << p.speaker_id << "\ndim\t" << p.dim
              << "\nn_reference_tracks\t" << p.n_reference_tracks << "\nbaseline_entries\t"
              << p.baseline_entries.size() << "\nphonemes\t" << p.phoneme_entries.size() << '\n';
    for (const auto& [label, vs] : p.phoneme_entries) {
      std::cout << "phoneme\t" << label << '\t' << vs.size() << '\n';
    }
    return 0;
  }
  const poi::PafFile paf = poi::load_paf_file(path);
  const auto segments = poi::segment_phonemes(paf);
  std::size_t silence = 0;
  for (const auto& f : paf.frames) silence += f.is_silence();
  std::cout << "type\tpaf\ntrack_id\t" << paf.track_id << "\nsample_rate\t" << paf.sample_rate
            << "\nframe_len\t" << paf.frame_len << "\nhop\t" << paf.hop << "\ndim\t" << paf.dim
            << "\ninventory_size\t" << paf.inventory.size() << "\nframes\t" << paf.frames.size()
            << "\nsilence_frames\t" << silence << "\nsegments\t" << segments.size()
            << "\nduration_seconds\t" << fmt17(paf.frame_to_seconds(paf.frames.size())) << '\n';
  std::map<std::string, std::size_t> counts;
  for (const auto& s : segments) ++counts[s.phoneme];
  for (const auto& [label, n] : counts) std::cout << "phoneme\t" << label << '\t' << n << '\n';
  for (std::size_t i = 0; i < std::min(max_frames, paf.frames.size()); ++i) {
    const auto& f = paf.frames[i];
    std::cout << "frame\t" << i << '\t'
              << (f.is_silence() ? std::string("-") : paf.inventory.labels[f.phoneme_id]);
    for (std::size_t k = 0; k < std::min<std::size_t>(4, f.features.size()); ++k) {
      std::cout << '\t' << f.features[k];
    }
    std::cout << (f.features.size() > 4 ? "\t...\n" : "\n");
  }
  return 0;
}

// ---------------------------------------------------------------- stats

int cmd_stats(const std::string& manifest_path, const std::string& out) {
  const poi::Manifest manifest = poi::load_manifest(manifest_path);
  std::ostringstream tsv;
  tsv << "group\ttracks\ttotal_seconds\tphoneme_seconds\tmean_total_seconds\t"
         "mean_phoneme_seconds\tanalyzed_fraction\n";
  for (const auto& s : poi::duration_stats(manifest)) {
    tsv << s.group << '\t' << s.tracks << '\t' << fmt17(s.total_seconds) << '\t'
        << fmt17(s.phoneme_seconds) << '\t' << fmt17(s.mean_total()) << '\t'
        << fmt17(s.mean_phoneme()) << '\t' << fmt17(s.analyzed_fraction()) << '\n';
  }
  if (out.empty()) {
    std::cout << tsv.str();
  } else {
    write_text(out, tsv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Person-of-interest phoneme-level deepfake detection"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  EnrollArgs enroll;
  auto* c_enroll = app.add_subcommand("enroll", "Build one profile per speaker");
  c_enroll->add_option("--manifest", enroll.manifest, "Manifest file")->required();
  c_enroll->add_option("--out-dir", enroll.out_dir, "Directory for .poip files")->required();
  c_enroll->add_option("--max-refs", enroll.max_refs, "Reference tracks per speaker")
      ->check(CLI::PositiveNumber);
  c_enroll->add_option("--jobs", enroll.jobs, "Worker threads")->check(CLI::PositiveNumber);
  c_enroll->add_option("--categories-file", enroll.categories_file, "Category table override");

  ScoreArgs score;
  auto* c_score = app.add_subcommand("score", "Score one track against a profile");
  c_score->add_option("--profile", score.profile)->required();
  c_score->add_option("--paf", score.paf)->required();
  c_score->add_option("--mode", score.mode)->check(CLI::IsMember({"phoneme", "baseline"}));
  c_score->add_option("--category", score.category);
  c_score->add_option("--categories-file", score.categories_file);
  c_score->add_option("--report", score.report, "Per-occurrence TSV path, or - for stdout");
  c_score->add_option("--top", score.top, "Phonemes listed in the ranking");
  c_score->add_option("--threshold", score.threshold, "Print decision fake iff score >= t");

  EvaluateArgs ev;
  auto* c_eval = app.add_subcommand("evaluate", "Enroll, score and report metrics");
  c_eval->add_option("--manifest", ev.manifest);
  c_eval->add_option("--out-dir", ev.out_dir)->required();
  c_eval->add_option("--mode", ev.mode)->check(CLI::IsMember({"phoneme", "baseline"}));
  c_eval->add_option("--category", ev.category);
  c_eval->add_flag("--category-sweep", ev.sweep, "All plus each of the seven categories");
  c_eval->add_option("--categories-file", ev.categories_file);
  c_eval->add_option("--aggregation", ev.aggregation)
      ->check(CLI::IsMember({"pooled", "speaker-mean"}));
  c_eval->add_option("--perturbed-manifest", ev.perturbed_manifest,
                     "Test rows scored against the clean profiles for delta EER");
  c_eval->add_option("--from-scores", ev.from_scores, "Recompute metrics from a score dump");
  c_eval->add_option("--max-refs", ev.max_refs)->check(CLI::PositiveNumber);
  c_eval->add_option("--jobs", ev.jobs)->check(CLI::PositiveNumber);

  PerturbArgs pt;
  auto* c_pert = app.add_subcommand("perturb", "Apply one distortion to a WAV file");
  c_pert->add_option("--in", pt.in)->required();
  c_pert->add_option("--out", pt.out)->required();
  c_pert->add_option("--awgn-snr", pt.awgn_snr, "Additive white noise at this SNR (dB)");
  c_pert->add_option("--seed", pt.seed, "Noise seed");
  c_pert->add_flag("--mulaw", pt.mulaw, "8-bit mu-law round trip");
  c_pert->add_flag("--mp3", pt.mp3, "MP3 round trip through an external encoder");
  c_pert->add_option("--bitrate", pt.bitrate, "MP3 bitrate, kbps")->check(CLI::PositiveNumber);
  c_pert->add_option("--encoder", pt.encoder, "Encoder executable (else $POI_MP3_ENCODER, lame)");
  c_pert->add_flag("--allow-any-rate", pt.allow_any_rate, "Accept sample rates other than 16 kHz");

  std::string inspect_path;
  std::size_t inspect_frames = 0;
  auto* c_inspect = app.add_subcommand("inspect", "Print a PAF or profile file");
  c_inspect->add_option("file", inspect_path)->required();
  c_inspect->add_option("--frames", inspect_frames, "Frames to list");

  std::string stats_manifest, stats_out;
  auto* c_stats = app.add_subcommand("stats", "Analyzed-duration report per speaker");
  c_stats->add_option("--manifest", stats_manifest)->required();
  c_stats->add_option("--out", stats_out, "TSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (quiet) poi::warning_sink() = [](std::string_view) {};

  try {
    if (*c_enroll) return cmd_enroll(enroll);
    if (*c_score) return cmd_score(score);
    if (*c_eval) return cmd_evaluate(ev);
    if (*c_pert) return cmd_perturb(pt);
    if (*c_inspect) return cmd_inspect(inspect_path, inspect_frames);
    if (*c_stats) return cmd_stats(stats_manifest, stats_out);
  } catch (const poi::Error& e) {
    std::cerr << "poi: error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "poi: error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "poi: internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

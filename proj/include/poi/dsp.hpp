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

// Amplitude normalization plus the test-time perturbations. MP3 goes
// through an external encoder.

#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "poi/error.hpp"
#include "poi/io.hpp"
#include "poi/wav.hpp"

namespace poi {

namespace detail {

inline double mean_power(const std::vector<double>& x) {
  double p = 0.0;
  for (double v : x) p += v * v;
  return x.empty() ? 0.0 : p / static_cast<double>(x.size());
}

}  // namespace detail

// Zero mean, unit population standard deviation.
inline AudioTrack normalize(const AudioTrack& in) {
  const auto& x = in.samples;
  if (x.empty()) throw Error(ErrorCode::DegenerateSignal, "empty signal");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(x.size()));
  if (sd <= 1e-12) {
    throw Error(ErrorCode::DegenerateSignal, "signal has zero variance");
  }
  AudioTrack out{std::vector<double>(x.size()), in.sample_rate};
  for (std::size_t i = 0; i < x.size(); ++i) out.samples[i] = (x[i] - mean) / sd;
  return out;
}

// x + n with n ~ N(0, P_x / 10^(snr/10)) i.i.d., P_x the mean signal power.
inline AudioTrack add_awgn(const AudioTrack& in, double snr_db, std::uint64_t seed) {
  const double power = detail::mean_power(in.samples);
  if (!(power > 0.0)) throw Error(ErrorCode::SilentSignal, "cannot set SNR on a silent signal");
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  AudioTrack out = in;
  for (double& v : out.samples) v += noise(rng);
  return out;
}

inline constexpr double kMuLaw = 255.0;
// Signed 8-bit code range used for the companded value: -127..127 keeps
// 0 and +/-1 exactly representable.
inline constexpr double kMuLawLevels = 127.0;

inline double mulaw_compress(double x) {
  return std::copysign(std::log1p(kMuLaw * std::abs(x)) / std::log1p(kMuLaw), x);
}

// pow rather than expm1 so that |y| = 1 maps back to exactly 1.
inline double mulaw_expand(double y) {
  return std::copysign((std::pow(1.0 + kMuLaw, std::abs(y)) - 1.0) / kMuLaw, y);
}

inline std::int8_t mulaw_quantize(double y) {
  return static_cast<std::int8_t>(std::nearbyint(std::clamp(y, -1.0, 1.0) * kMuLawLevels));
}

// Clamp to [-1, 1], then compress, quantize to 8 bits and expand.
inline AudioTrack mulaw_roundtrip(const AudioTrack& in) {
  AudioTrack out = in;
  for (double& v : out.samples) {
    const double x = std::clamp(v, -1.0, 1.0);
    v = mulaw_expand(mulaw_quantize(mulaw_compress(x)) / kMuLawLevels);
  }
  return out;
}

inline constexpr double kSnrMax = std::numeric_limits<double>::max();

// 10 log10(P_clean / P_(noisy - clean)); kSnrMax when the signals coincide.
inline double measure_snr(const AudioTrack& clean, const AudioTrack& noisy) {
  if (clean.samples.size() != noisy.samples.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(clean.samples.size()) + " vs " +
                    std::to_string(noisy.samples.size()) + " samples");
  }
  const double p_clean = detail::mean_power(clean.samples);
  if (!(p_clean > 0.0)) throw Error(ErrorCode::SilentSignal, "clean signal is silent");
  double p_noise = 0.0;
  for (std::size_t i = 0; i < clean.samples.size(); ++i) {
    const double d = noisy.samples[i] - clean.samples[i];
    p_noise += d * d;
  }
  if (p_noise == 0.0) return kSnrMax;
  p_noise /= static_cast<double>(clean.samples.size());
  return 10.0 * std::log10(p_clean / p_noise);
}

// Command templates accept {encoder}, {input}, {output} and {bitrate}.
// The defaults fit the LAME command line.
struct Mp3Options {
  std::string encoder;  // empty: $POI_MP3_ENCODER, then "lame" on PATH
  std::string encode_template = "{encoder} --quiet --cbr -b {bitrate} {input} {output}";
  std::string decode_template = "{encoder} --quiet --decode {input} {output}";
  int bitrate_kbps = 128;
  double max_drift_seconds = 0.05;
};

namespace detail {

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

inline std::string expand_template(std::string tpl,
                                   const std::vector<std::pair<std::string, std::string>>& vars) {
  for (const auto& [key, value] : vars) {
    const std::string needle = "{" + key + "}";
    for (std::size_t at = tpl.find(needle); at != std::string::npos;
         at = tpl.find(needle, at + value.size())) {
      tpl.replace(at, needle.size(), value);
    }
  }
  return tpl;
}

inline bool is_executable(const std::filesystem::path& p) {
  std::error_code ec;
  return std::filesystem::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
}

inline std::optional<std::filesystem::path> find_executable(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name.find('/') != std::string::npos) {
    if (is_executable(name)) return std::filesystem::path(name);
    return std::nullopt;
  }
  const char* path_env = std::getenv("PATH");
  std::string path = path_env ? path_env : "";
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t end = std::min(path.find(':', start), path.size());
    const std::filesystem::path candidate =
        std::filesystem::path(path.substr(start, end - start)) / name;
    if (end > start && is_executable(candidate)) return candidate;
    start = end + 1;
  }
  return std::nullopt;
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<std::uint64_t> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0; attempt < 100; ++attempt) {
      path_ = base / ("poi-" + std::to_string(::getpid()) + "-" +
                      std::to_string(counter.fetch_add(1)));
      if (std::filesystem::create_directory(path_)) return;
    }
    throw Error(ErrorCode::IoError, "cannot create a temporary directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace detail

inline std::filesystem::path resolve_mp3_encoder(const Mp3Options& opts) {
  std::string name = opts.encoder;
  if (name.empty()) {
    const char* env = std::getenv("POI_MP3_ENCODER");
    name = env && *env ? env : "lame";
  }
  auto found = detail::find_executable(name);
  if (!found) {
    throw Error(ErrorCode::EncoderMissing,
                "MP3 encoder '" + name +
                    "' not found; set POI_MP3_ENCODER or pass an encoder path");
  }
  return *found;
}

// WAV -> MP3 -> WAV through the external encoder. The decoded signal is
// trimmed or zero-padded back to the input length; drift beyond
// max_drift_seconds is an error.
inline AudioTrack mp3_roundtrip_external(const AudioTrack& in, const Mp3Options& opts = {}) {
  const auto encoder = resolve_mp3_encoder(opts);
  detail::TempDir tmp;
  const auto wav_in = tmp.path() / "in.wav";
  const auto mp3 = tmp.path() / "coded.mp3";
  const auto wav_out = tmp.path() / "out.wav";
  write_file_atomic(wav_in, write_wav(in));

  auto run = [&](const std::string& tpl, const std::filesystem::path& src,
                 const std::filesystem::path& dst) {
    const std::string cmd = detail::expand_template(
        tpl, {{"encoder", detail::shell_quote(encoder.string())},
              {"input", detail::shell_quote(src.string())},
              {"output", detail::shell_quote(dst.string())},
              {"bitrate", std::to_string(opts.bitrate_kbps)}});
    const int status = std::system(cmd.c_str());
    if (status != 0) {
      throw Error(ErrorCode::EncoderFailed,
                  "command exited with status " + std::to_string(status) + ": " + cmd);
    }
    if (!std::filesystem::exists(dst)) {
      throw Error(ErrorCode::EncoderFailed, "command produced no output: " + cmd);
    }
  };
  run(opts.encode_template, wav_in, mp3);
  run(opts.decode_template, mp3, wav_out);

  AudioTrack decoded;
  try {
    decoded = read_wav(read_file(wav_out), {in.sample_rate, false});
  } catch (const Error& e) {
    throw Error(ErrorCode::EncoderFailed, std::string("decoded audio unreadable: ") + e.what());
  }
  const double drift =
      std::abs(static_cast<double>(decoded.samples.size()) -
               static_cast<double>(in.samples.size())) / in.sample_rate;
  if (drift > opts.max_drift_seconds) {
    throw Error(ErrorCode::DurationDrift,
                "decoded length differs from source by " + std::to_string(drift) + " s");
  }
  decoded.samples.resize(in.samples.size(), 0.0);
  return decoded;
}

}  // namespace poi

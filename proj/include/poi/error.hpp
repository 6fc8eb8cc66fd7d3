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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace poi {

// Every failure the library reports carries one of these names.
enum class ErrorCode {
  // container parsing (PAF and profile files)
  BadMagic,
  UnsupportedVersion,
  TruncatedFile,
  DimMismatch,
  InvalidPhonemeId,
  InvalidInventory,
  TooManyPhonemes,
  InvalidProfile,
  // enrollment / scoring
  EmptyReferenceSet,
  TrackWithZeroFrames,
  ZeroVector,
  EmptyEntry,
  NoScorablePhonemes,
  EmptyTrack,
  WrongMode,
  UnknownCategory,
  // metrics
  OneClassOnly,
  NoValidSpeaker,
  // audio
  NotRiff,
  UnsupportedCodec,
  UnsupportedBitDepth,
  SampleRateMismatch,
  DegenerateSignal,
  SilentSignal,
  LengthMismatch,
  EncoderMissing,
  EncoderFailed,
  DurationDrift,
  // plumbing
  ManifestError,
  InvalidArgument,
  IoError,
};

inline constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::InvalidPhonemeId: return "InvalidPhonemeId";
    case ErrorCode::InvalidInventory: return "InvalidInventory";
    case ErrorCode::TooManyPhonemes: return "TooManyPhonemes";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::EmptyReferenceSet: return "EmptyReferenceSet";
    case ErrorCode::TrackWithZeroFrames: return "TrackWithZeroFrames";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptyEntry: return "EmptyEntry";
    case ErrorCode::NoScorablePhonemes: return "NoScorablePhonemes";
    case ErrorCode::EmptyTrack: return "EmptyTrack";
    case ErrorCode::WrongMode: return "WrongMode";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::OneClassOnly: return "OneClassOnly";
    case ErrorCode::NoValidSpeaker: return "NoValidSpeaker";
    case ErrorCode::NotRiff: return "NotRiff";
    case ErrorCode::UnsupportedCodec: return "UnsupportedCodec";
    case ErrorCode::UnsupportedBitDepth: return "UnsupportedBitDepth";
    case ErrorCode::SampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::DegenerateSignal: return "DegenerateSignal";
    case ErrorCode::SilentSignal: return "SilentSignal";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EncoderMissing: return "EncoderMissing";
    case ErrorCode::EncoderFailed: return "EncoderFailed";
    case ErrorCode::DurationDrift: return "DurationDrift";
    case ErrorCode::ManifestError: return "ManifestError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  // Parse errors name the byte offset where decoding stopped.
  Error(ErrorCode code, const std::string& message, std::uint64_t offset)
      : std::runtime_error(std::string(error_name(code)) + " at byte " +
                           std::to_string(offset) + ": " + message),
        code_(code),
        offset_(offset) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::uint64_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::uint64_t> offset_;
};

using WarningSink = std::function<void(std::string_view)>;

// Non-fatal conditions such as skipped tracks are routed here. Defaults to stderr; tests and the CLI may replace it.
inline WarningSink& warning_sink() {
  static WarningSink sink = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return sink;
}

inline void warn(std::string_view msg) {
  if (warning_sink()) warning_sink()(msg);
}

}  // namespace poi

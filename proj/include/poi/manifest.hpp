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

// Dataset manifests: a delimited text table with a header row.
//
//   speaker_id<TAB>path<TAB>label<TAB>split[<TAB>track_id]
//
// Tab or comma delimited (picked from the header line); columns may appear
// in any order. `label` is 0 (bona fide) or 1 (fake); `split` is
// "reference" or "test". Relative paths resolve against the manifest's
// directory. Blank lines and lines starting with '#' are ignored.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "poi/error.hpp"

namespace poi {

enum class Split { Reference, Test };

struct ManifestRow {
  std::string speaker_id;
  std::filesystem::path path;
  int label = 0;
  Split split = Split::Test;
  std::string track_id;  // defaults to the file stem
  std::size_t line = 0;
};

struct Manifest {
  std::vector<ManifestRow> rows;

  // Speakers in order of first appearance.
  std::vector<std::string> speakers() const {
    std::vector<std::string> out;
    for (const auto& r : rows) {
      if (std::find(out.begin(), out.end(), r.speaker_id) == out.end()) {
        out.push_back(r.speaker_id);
      }
    }
    return out;
  }

  std::vector<const ManifestRow*> select(Split split) const {
    std::vector<const ManifestRow*> out;
    for (const auto& r : rows) {
      if (r.split == split) out.push_back(&r);
    }
    return out;
  }
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delim)) {
    field.erase(0, field.find_first_not_of(" \t\r"));
    field.erase(field.find_last_not_of(" \t\r") + 1);
    out.push_back(field);
  }
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

}  // namespace detail

inline Manifest parse_manifest(std::istream& in,
                               const std::filesystem::path& base_dir = {},
                               bool check_paths = false) {
  auto fail = [](std::size_t line, const std::string& msg) -> Error {
    return Error(ErrorCode::ManifestError, "line " + std::to_string(line) + ": " + msg);
  };

  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  char delim = '\t';
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    delim = line.find('\t') != std::string::npos ? '\t' : ',';
    header = detail::split_fields(line, delim);
    break;
  }
  if (header.empty()) throw Error(ErrorCode::ManifestError, "manifest is empty");

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"speaker_id", "path", "label", "split"}) {
    if (!col.count(required)) {
      throw fail(lineno, std::string("header lacks column '") + required + "'");
    }
  }
  const bool has_track_id = col.count("track_id") > 0;

  Manifest m;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto f = detail::split_fields(line, delim);
    if (f.size() != header.size()) {
      throw fail(lineno, "expected " + std::to_string(header.size()) + " fields, got " +
                             std::to_string(f.size()));
    }
    ManifestRow row;
    row.line = lineno;
    row.speaker_id = f[col["speaker_id"]];
    if (row.speaker_id.empty()) throw fail(lineno, "empty speaker_id");
    const std::string& path = f[col["path"]];
    if (path.empty()) throw fail(lineno, "empty path");
    row.path = std::filesystem::path(path);
    if (row.path.is_relative() && !base_dir.empty()) row.path = base_dir / row.path;

    const std::string& label = f[col["label"]];
    if (label == "0") {
      row.label = 0;
    } else if (label == "1") {
      row.label = 1;
    } else {
      throw fail(lineno, "label must be 0 or 1, got '" + label + "'");
    }
    const std::string& split = f[col["split"]];
    if (split == "reference") {
      row.split = Split::Reference;
    } else if (split == "test") {
      row.split = Split::Test;
    } else {
      throw fail(lineno, "split must be 'reference' or 'test', got '" + split + "'");
    }
    if (row.split == Split::Reference && row.label != 0) {
      throw fail(lineno, "reference rows must be bona fide (label 0)");
    }
    row.track_id = has_track_id ? f[col["track_id"]] : std::string();
    if (row.track_id.empty()) row.track_id = row.path.stem().string();
    if (check_paths && !std::filesystem::exists(row.path)) {
      throw fail(lineno, "no such file: " + row.path.string());
    }
    m.rows.push_back(std::move(row));
  }
  if (m.rows.empty()) throw Error(ErrorCode::ManifestError, "manifest has no rows");
  return m;
}

inline Manifest load_manifest(const std::filesystem::path& p, bool check_paths = true) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + p.string());
  return parse_manifest(in, p.parent_path(), check_paths);
}

}  // namespace poi

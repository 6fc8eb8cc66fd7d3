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

// On-disk synthetic corpora: PAF files plus a manifest.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "poi/io.hpp"
#include "support/synthetic.hpp"

namespace poi::testing {

struct CorpusSpec {
  std::size_t speakers = 2;
  std::size_t references = 5;
  std::size_t genuine = 10;
  std::size_t fakes = 10;
  double shift = 3.0;  // fake cluster displacement, in sigma
  std::uint32_t dim = 16;
  ClusterTrackSpec track{};
};

// Writes <dir>/<speaker>/<track>.paf and <dir>/manifest.tsv (relative
// paths) and returns the manifest path.
inline std::filesystem::path write_cluster_corpus(const std::filesystem::path& dir,
                                                  const CorpusSpec& spec,
                                                  std::uint64_t seed = 1) {
  Rng rng(seed);
  const PhonemeInventory inventory = CategoryTable::builtin().inventory();
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.tsv");
  manifest << "speaker_id\tpath\tlabel\tsplit\n";
  for (std::size_t s = 0; s < spec.speakers; ++s) {
    const std::string speaker = "spk" + std::to_string(s);
    const ClusterSpeaker cs = make_cluster_speaker(rng, inventory, spec.dim);
    std::filesystem::create_directories(dir / speaker);
    auto emit = [&](const std::string& name, double shift, int label, const char* split) {
      ClusterTrackSpec ts = spec.track;
      ts.shift = shift;
      const std::string rel = speaker + "/" + name + ".paf";
      write_file_atomic(dir / rel, write_paf(make_cluster_track(rng, cs, ts, name)));
      manifest << speaker << '\t' << rel << '\t' << label << '\t' << split << '\n';
    };
    for (std::size_t i = 0; i < spec.references; ++i) {
      emit("ref" + std::to_string(i), 0.0, 0, "reference");
    }
    for (std::size_t i = 0; i < spec.genuine; ++i) {
      emit("real" + std::to_string(i), 0.0, 0, "test");
    }
    for (std::size_t i = 0; i < spec.fakes; ++i) {
      emit("fake" + std::to_string(i), spec.shift, 1, "test");
    }
  }
  return dir / "manifest.tsv";
}

}  // namespace poi::testing

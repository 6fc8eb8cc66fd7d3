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

#include "poi/manifest.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <sstream>

#include "poi/dsp.hpp"
#include "poi/evaluation.hpp"
#include "support/corpus.hpp"

namespace poi {
namespace {

ErrorCode parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_manifest(in);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

TEST(Manifest, TabAndComma) {
  std::istringstream tsv(
      "# comment\nspeaker_id\tpath\tlabel\tsplit\n"
      "a\tx/r1.paf\t0\treference\n\nb\t/abs/t.paf\t1\ttest\n");
  const Manifest m = parse_manifest(tsv, "/base");
  ASSERT_EQ(m.rows.size(), 2u);
  EXPECT_EQ(m.rows[0].path, std::filesystem::path("/base/x/r1.paf"));
  EXPECT_EQ(m.rows[0].track_id, "r1");
  EXPECT_EQ(m.rows[0].line, 3u);
  EXPECT_EQ(m.rows[1].path, std::filesystem::path("/abs/t.paf"));
  EXPECT_EQ(m.rows[1].label, 1);
  EXPECT_EQ(m.rows[1].split, Split::Test);

  std::istringstream csv("split,label,path,speaker_id,track_id\ntest,0,p.paf,s,custom\n");
  const Manifest c = parse_manifest(csv);
  EXPECT_EQ(c.rows[0].speaker_id, "s");
  EXPECT_EQ(c.rows[0].track_id, "custom");
}

TEST(Manifest, SpeakersInFirstAppearanceOrder) {
  std::istringstream in(
      "speaker_id,path,label,split\nz,1,0,test\na,2,0,test\nz,3,1,test\n");
  const Manifest m = parse_manifest(in);
  EXPECT_EQ(m.speakers(), (std::vector<std::string>{"z", "a"}));
  EXPECT_EQ(m.select(Split::Test).size(), 3u);
  EXPECT_TRUE(m.select(Split::Reference).empty());
}

TEST(Manifest, Errors) {
  EXPECT_EQ(parse_error(""), ErrorCode::ManifestError);
  EXPECT_EQ(parse_error("speaker_id,path,label,split\n"), ErrorCode::ManifestError);
  EXPECT_EQ(parse_error("speaker_id,path,label\na,b,0\n"), ErrorCode::ManifestError);
  EXPECT_EQ(parse_error("speaker_id,path,label,split\na,b,2,test\n"), ErrorCode::ManifestError);
  EXPECT_EQ(parse_error("speaker_id,path,label,split\na,b,0,train\n"), ErrorCode::ManifestError);
  EXPECT_EQ(parse_error("speaker_id,path,label,split\na,b,1,reference\n"),
            ErrorCode::ManifestError);
  EXPECT_EQ(parse_error("speaker_id,path,label,split\na,b,0\n"), ErrorCode::ManifestError);
  EXPECT_EQ(parse_error("speaker_id,path,label,split\n,b,0,test\n"), ErrorCode::ManifestError);
  try {
    std::istringstream in("speaker_id,path,label,split\na,b,0,test\na,b,x,test\n");
    parse_manifest(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Manifest, MissingFiles) {
  detail::TempDir dir;
  write_file_atomic(dir.path() / "m.tsv", "speaker_id\tpath\tlabel\tsplit\na\tgone.paf\t0\ttest\n");
  EXPECT_THROW(load_manifest(dir.path() / "m.tsv"), Error);
  EXPECT_NO_THROW(load_manifest(dir.path() / "m.tsv", false));
  try {
    load_manifest(dir.path() / "absent.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(ParallelFor, CoversEveryIndexAndRethrowsFirst) {
  for (unsigned jobs : {1u, 4u}) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    try {
      parallel_for(50, jobs, [](std::size_t i) {
        if (i == 7 || i == 30) throw Error(ErrorCode::IoError, std::to_string(i));
      });
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(std::string(e.what()), "IoError: 7");
    }
  }
}

class CorpusTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::CorpusSpec spec;
    spec.speakers = 3;
    spec.references = 4;
    spec.genuine = 6;
    spec.fakes = 6;
    manifest_ = load_manifest(testing::write_cluster_corpus(dir_.path(), spec, 5));
  }

  detail::TempDir dir_;
  Manifest manifest_;
};

TEST_F(CorpusTest, EnrollAndScore) {
  std::map<std::string, EnrollmentLog> logs;
  const auto profiles = enroll_speakers(manifest_, {}, 3, &logs);
  ASSERT_EQ(profiles.size(), 3u);
  EXPECT_EQ(profiles.at("spk1").n_reference_tracks, 4u);
  EXPECT_EQ(logs.at("spk2").used_tracks, 4u);

  const auto table = CategoryTable::builtin();
  const std::vector<CategoryName> all(kAllCategories.begin(), kAllCategories.end());
  const auto serial = score_test_rows(manifest_, profiles, ScoreMode::Phoneme, all, table, 1);
  const auto threaded = score_test_rows(manifest_, profiles, ScoreMode::Phoneme, all, table, 4);
  ASSERT_EQ(serial.size(), 8u);
  ASSERT_EQ(serial[0].size(), 36u);
  for (std::size_t c = 0; c < serial.size(); ++c) {
    for (std::size_t i = 0; i < serial[c].size(); ++i) {
      EXPECT_EQ(serial[c][i].score, threaded[c][i].score);
    }
  }
  // A shift of 3 sigma separates the classes completely.
  EXPECT_EQ(eer(scored_only(serial[0])), 0.0);

  const auto baseline = score_test_rows(manifest_, profiles, ScoreMode::Baseline, all, table);
  ASSERT_EQ(baseline.size(), 1u);
  for (const auto& r : baseline[0]) EXPECT_EQ(r.status, "ok");
}

TEST_F(CorpusTest, ReferenceCap) {
  EnrollmentConfig config;
  config.max_reference_tracks = 2;
  std::map<std::string, EnrollmentLog> logs;
  std::vector<std::string> warnings;
  const WarningSink saved = warning_sink();
  warning_sink() = [&](std::string_view m) { warnings.emplace_back(m); };
  const auto profiles = enroll_speakers(manifest_, config, 1, &logs);
  warning_sink() = saved;
  EXPECT_EQ(profiles.at("spk0").n_reference_tracks, 2u);
  EXPECT_EQ(logs.at("spk0").ignored_over_cap, 2u);
  EXPECT_EQ(warnings.size(), 3u);
}

TEST_F(CorpusTest, UnscorableTracksAreListed) {
  const auto profiles = enroll_speakers(manifest_, {});
  const auto table = CategoryTable::builtin();
  // Restrict the table so one category has no members present.
  std::istringstream custom("Affricates: nothing-here\n");
  const auto narrow = CategoryTable::parse(custom);
  const auto res = score_test_rows(manifest_, profiles, ScoreMode::Phoneme,
                                   {CategoryName::Affricates}, narrow);
  for (const auto& r : res[0]) {
    EXPECT_FALSE(r.score.has_value());
    EXPECT_EQ(r.status, "NoScorablePhonemes");
  }
  EXPECT_TRUE(scored_only(res[0]).empty());
}

TEST_F(CorpusTest, MissingProfile) {
  auto profiles = enroll_speakers(manifest_, {});
  profiles.erase("spk1");
  try {
    score_test_rows(manifest_, profiles, ScoreMode::Phoneme, {CategoryName::All},
                    CategoryTable::builtin());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ManifestError);
  }
}

TEST_F(CorpusTest, ScoreDumpRecomputes) {
  const auto profiles = enroll_speakers(manifest_, {});
  auto results = score_test_rows(manifest_, profiles, ScoreMode::Phoneme, {CategoryName::All},
                                 CategoryTable::builtin())[0];
  results[0].score.reset();
  results[0].status = "EmptyTrack";
  std::stringstream dump;
  write_score_dump(dump, results);
  const auto back = read_score_dump(dump);
  ASSERT_EQ(back.size(), results.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].track_id, results[i].track_id);
    EXPECT_EQ(back[i].status, results[i].status);
    EXPECT_EQ(back[i].score, results[i].score);
  }
  const auto a = scored_only(results), b = scored_only(back);
  EXPECT_NEAR(eer(a), eer(b), 1e-9);
  EXPECT_NEAR(auc(roc_curve(a)), auc(roc_curve(b)), 1e-9);
}

TEST_F(CorpusTest, DurationStats) {
  const auto rows = duration_stats(manifest_);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows.back().group, "ALL");
  EXPECT_EQ(rows.back().tracks, 48u);
  // 40 segments of 3 labelled frames, 41 silence runs of 2 frames.
  const double total = 202 * 320.0 / 16000, labelled = 120 * 320.0 / 16000;
  EXPECT_NEAR(rows[0].mean_total(), total, 1e-12);
  EXPECT_NEAR(rows[0].mean_phoneme(), labelled, 1e-12);
  EXPECT_NEAR(rows.back().analyzed_fraction(), 120.0 / 202, 1e-12);
}

TEST(Aggregation, Parse) {
  EXPECT_EQ(parse_aggregation("pooled"), Aggregation::Pooled);
  EXPECT_EQ(parse_aggregation("speaker-mean"), Aggregation::SpeakerMean);
  EXPECT_THROW(parse_aggregation("median"), Error);
}

}  // namespace
}  // namespace poi

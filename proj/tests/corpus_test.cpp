// Copyright 2026 The MOSEval Authors.
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

#include "moseval/corpus.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "moseval/rng.hpp"
#include "test_util.hpp"

namespace moseval {
namespace {

using testing::TempDir;
using testing::write_manifest_fixture;

TEST(NormalizeScale, EndpointsMapToOneAndFive) {
  const ScaleSpec scale{1.0, 10.0};
  EXPECT_DOUBLE_EQ(normalize_scale(1.0, scale), 1.0);
  EXPECT_DOUBLE_EQ(normalize_scale(10.0, scale), 5.0);
}

TEST(NormalizeScale, MidpointMapsToMidpoint) {
  EXPECT_DOUBLE_EQ(normalize_scale(5.5, ScaleSpec{1.0, 10.0}), 3.0);
}

TEST(NormalizeScale, IdentityOnCanonicalScale) {
  const ScaleSpec scale{1.0, 5.0};
  for (double s : {1.0, 2.25, 3.0, 4.75, 5.0}) {
    EXPECT_DOUBLE_EQ(normalize_scale(s, scale), s);
  }
}

TEST(NormalizeScale, IsAffine) {
  const ScaleSpec scale{2.0, 9.0};
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(scale.lo, scale.hi);
    const double b = rng.uniform(scale.lo, scale.hi);
    const double lambda = rng.next_double();
    const double lhs = normalize_scale(lambda * a + (1 - lambda) * b, scale);
    const double rhs = lambda * normalize_scale(a, scale) +
                       (1 - lambda) * normalize_scale(b, scale);
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(NormalizeScale, RejectsOutOfRange) {
  EXPECT_THROW(normalize_scale(0.5, ScaleSpec{1.0, 5.0}), DataError);
  EXPECT_THROW(normalize_scale(10.5, ScaleSpec{1.0, 10.0}), DataError);
}

TEST(LoadManifest, IdentityScaleKeepsScores) {
  TempDir dir;
  write_manifest_fixture(dir.path(), "1", "5",
                         "u1,sysA,spk1,t1,\n"
                         "u2,sysA,spk1,t2,\n"
                         "u3,sysB,spk2,t3,\n",
                         "u1,l1,4\nu1,l2,5\nu2,l1,3\nu2,l3,3.5\n"
                         "u3,l2,2\nu3,l3,1\nu3,l4,4.25\nu3,l1,5\n");
  const Corpus corpus = load_manifest(dir / "manifest.json");
  EXPECT_EQ(corpus.utterances.size(), 3u);
  EXPECT_EQ(corpus.ratings.size(), 8u);
  EXPECT_DOUBLE_EQ(corpus.ratings[0].score, 4.0);
  EXPECT_DOUBLE_EQ(corpus.ratings[3].score, 3.5);
  EXPECT_TRUE(validate_corpus(corpus).ok());
}

TEST(LoadManifest, RescalesOneToTenScale) {
  TempDir dir;
  write_manifest_fixture(dir.path(), "1", "10", "u1,sysA,spk1,t1,\n",
                         "u1,l1,10\nu1,l2,1\nu1,l3,5.5\n");
  const Corpus corpus = load_manifest(dir / "manifest.json");
  EXPECT_DOUBLE_EQ(corpus.ratings[0].score, 5.0);
  EXPECT_DOUBLE_EQ(corpus.ratings[1].score, 1.0);
  EXPECT_DOUBLE_EQ(corpus.ratings[2].score, 3.0);
}

TEST(LoadManifest, RejectsUnknownUtteranceWithLineNumber) {
  TempDir dir;
  write_manifest_fixture(dir.path(), "1", "5", "u1,sysA,spk1,t1,\n",
                         "u1,l1,4\nuX,l2,3\n");
  try {
    load_manifest(dir / "manifest.json");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("uX"), std::string::npos) << what;
    EXPECT_NE(what.find(":3"), std::string::npos) << what;  // header is line 1
  }
}

TEST(LoadManifest, RejectsScoreOutsideDeclaredScale) {
  TempDir dir;
  write_manifest_fixture(dir.path(), "1", "5", "u1,sysA,spk1,t1,\n",
                         "u1,l1,5.5\n");
  EXPECT_THROW(load_manifest(dir / "manifest.json"), DataError);
}

TEST(LoadManifest, RejectsMalformedRow) {
  TempDir dir;
  write_manifest_fixture(dir.path(), "1", "5", "u1,sysA,spk1,t1,\n",
                         "u1,l1\n");
  try {
    load_manifest(dir / "manifest.json");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
}

TEST(LoadManifest, RejectsNonNumericScore) {
  TempDir dir;
  write_manifest_fixture(dir.path(), "1", "5", "u1,sysA,spk1,t1,\n",
                         "u1,l1,four\n");
  EXPECT_THROW(load_manifest(dir / "manifest.json"), DataError);
}

TEST(LoadManifest, RejectsDuplicateListenerRating) {
  TempDir dir;
  write_manifest_fixture(dir.path(), "1", "5", "u1,sysA,spk1,t1,\n",
                         "u1,l1,4\nu1,l1,5\n");
  EXPECT_THROW(load_manifest(dir / "manifest.json"), DataError);
}

TEST(LoadManifest, MissingFileIsIoError) {
  TempDir dir;
  EXPECT_THROW(load_manifest(dir / "nope.json"), IoError);
}

TEST(ValidateCorpus, EmptyReportForValidCorpus) {
  const Corpus corpus = testing::make_corpus(
      {{"u1", "s1", "p1", "t1"}}, {{"u1", "l1", 3.0}, {"u1", "l2", 4.0}});
  EXPECT_TRUE(validate_corpus(corpus).ok());
}

TEST(ValidateCorpus, FlagsUnratedUtterance) {
  const Corpus corpus = testing::make_corpus(
      {{"u1", "s1", "p1", "t1"}, {"u2", "s1", "p1", "t2"}},
      {{"u1", "l1", 3.0}});
  const auto report = validate_corpus(corpus);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, "unrated utterance");
}

TEST(ValidateCorpus, FlagsScoreOutOfRange) {
  const Corpus corpus =
      testing::make_corpus({{"u1", "s1", "p1", "t1"}}, {{"u1", "l1", 5.3}});
  const auto report = validate_corpus(corpus);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, "score out of range");
}

TEST(ValidateCorpus, FlagsDanglingRating) {
  const Corpus corpus = testing::make_corpus({{"u1", "s1", "p1", "t1"}},
                                             {{"u1", "l1", 3.0},
                                              {"ghost", "l1", 3.0}});
  const auto report = validate_corpus(corpus);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, "dangling rating");
}

TEST(GenerateSynthetic, CountsComeOutExactly) {
  SyntheticSpec spec;
  spec.n_systems = 2;
  spec.utterances_per_system = 5;
  spec.ratings_per_utterance = 8;
  spec.n_listeners = 12;
  spec.seed = 7;
  const Corpus corpus = generate_synthetic(spec);
  EXPECT_EQ(corpus.utterances.size(), 10u);
  EXPECT_EQ(corpus.ratings.size(), 80u);
  EXPECT_TRUE(validate_corpus(corpus).ok());
}

TEST(GenerateSynthetic, DeterministicForFixedSeed) {
  SyntheticSpec spec;
  spec.seed = 7;
  const Corpus a = generate_synthetic(spec);
  const Corpus b = generate_synthetic(spec);
  ASSERT_EQ(a.utterances.size(), b.utterances.size());
  ASSERT_EQ(a.ratings.size(), b.ratings.size());
  for (std::size_t i = 0; i < a.ratings.size(); ++i) {
    EXPECT_EQ(a.ratings[i].utterance_id, b.ratings[i].utterance_id);
    EXPECT_EQ(a.ratings[i].listener_id, b.ratings[i].listener_id);
    EXPECT_EQ(a.ratings[i].score, b.ratings[i].score);  // bit identical
  }
}

TEST(GenerateSynthetic, HitsRequestedSystemMeans) {
  SyntheticSpec spec;
  spec.n_systems = 2;
  spec.system_means = {2.0, 4.0};
  spec.spread = 0.1;
  spec.utterances_per_system = 200;
  spec.ratings_per_utterance = 4;
  spec.n_listeners = 30;
  spec.seed = 3;
  const Corpus corpus = generate_synthetic(spec);

  // Empirical per-system mean over all that system's ratings.
  std::unordered_map<std::string, std::pair<double, int>> acc;
  std::unordered_map<std::string, std::string> system_of;
  for (const auto& u : corpus.utterances) {
    system_of[u.utterance_id] = u.system_id;
  }
  for (const auto& r : corpus.ratings) {
    auto& a = acc[system_of[r.utterance_id]];
    a.first += r.score;
    a.second += 1;
  }
  ASSERT_EQ(acc.size(), 2u);
  EXPECT_NEAR(acc["sys000"].first / acc["sys000"].second, 2.0, 0.1);
  EXPECT_NEAR(acc["sys001"].first / acc["sys001"].second, 4.0, 0.1);
}

TEST(GenerateSynthetic, RejectsUnrealizableSpec) {
  SyntheticSpec spec;
  spec.ratings_per_utterance = 9;
  spec.n_listeners = 8;
  EXPECT_THROW(generate_synthetic(spec), DataError);
  spec = SyntheticSpec{};
  spec.n_systems = 0;
  EXPECT_THROW(generate_synthetic(spec), DataError);
}

TEST(CorpusRoundTrip, SaveThenLoadIsExact) {
  SyntheticSpec spec;
  spec.n_systems = 3;
  spec.utterances_per_system = 7;
  spec.ratings_per_utterance = 5;
  spec.seed = 42;
  const Corpus original = generate_synthetic(spec);

  TempDir dir;
  const auto manifest = save_corpus(original, dir.path());
  const Corpus loaded = load_manifest(manifest);

  ASSERT_EQ(loaded.utterances.size(), original.utterances.size());
  ASSERT_EQ(loaded.ratings.size(), original.ratings.size());
  for (std::size_t i = 0; i < original.utterances.size(); ++i) {
    EXPECT_EQ(loaded.utterances[i].utterance_id,
              original.utterances[i].utterance_id);
    EXPECT_EQ(loaded.utterances[i].system_id, original.utterances[i].system_id);
    EXPECT_EQ(loaded.utterances[i].speaker_id,
              original.utterances[i].speaker_id);
    EXPECT_EQ(loaded.utterances[i].text_id, original.utterances[i].text_id);
  }
  for (std::size_t i = 0; i < original.ratings.size(); ++i) {
    EXPECT_EQ(loaded.ratings[i].utterance_id, original.ratings[i].utterance_id);
    EXPECT_EQ(loaded.ratings[i].listener_id, original.ratings[i].listener_id);
    EXPECT_EQ(loaded.ratings[i].score, original.ratings[i].score);
  }
  EXPECT_TRUE(validate_corpus(loaded).ok());
}

TEST(CorpusIndex, RejectsDuplicateIds) {
  const Corpus corpus = testing::make_corpus(
      {{"u1", "s1", "p1", "t1"}, {"u1", "s1", "p1", "t1"}},
      {{"u1", "l1", 3.0}});
  EXPECT_THROW(CorpusIndex{corpus}, DataError);
}

}  // namespace
}  // namespace moseval

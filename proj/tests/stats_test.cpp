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

#include "moseval/stats.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "moseval/rng.hpp"
#include "test_util.hpp"
#include "transport_oracle.hpp"

namespace moseval {
namespace {

std::vector<double> random_sample(Rng& rng, std::size_t max_len, double lo,
                                  double hi) {
  const std::size_t n = 1 + rng.below(max_len);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

TEST(UtteranceStats, WorkedExample) {
  const Corpus corpus = testing::make_corpus(
      {{"u1", "s1", "p1", "t1"}},
      {{"u1", "a", 4}, {"u1", "b", 4}, {"u1", "c", 5}, {"u1", "d", 5},
       {"u1", "e", 3}, {"u1", "f", 4}, {"u1", "g", 4}, {"u1", "h", 5}});
  const auto stats = utterance_stats(corpus);
  ASSERT_EQ(stats.size(), 1u);
  EXPECT_DOUBLE_EQ(stats[0].mean_score, 4.25);
  EXPECT_NEAR(stats[0].stddev, std::sqrt(3.5 / 7.0), 1e-12);  // 0.70711
  EXPECT_EQ(stats[0].rating_count, 8);
}

TEST(UtteranceStats, SingleRatingHasZeroStddev) {
  const Corpus corpus =
      testing::make_corpus({{"u1", "s1", "p1", "t1"}}, {{"u1", "a", 3}});
  const auto stats = utterance_stats(corpus);
  EXPECT_DOUBLE_EQ(stats[0].mean_score, 3.0);
  EXPECT_DOUBLE_EQ(stats[0].stddev, 0.0);
  EXPECT_EQ(stats[0].rating_count, 1);
}

TEST(UtteranceStats, ConstantSampleHasZeroStddev) {
  const Corpus corpus = testing::make_corpus(
      {{"u1", "s1", "p1", "t1"}},
      {{"u1", "a", 2}, {"u1", "b", 2}, {"u1", "c", 2}});
  const auto stats = utterance_stats(corpus);
  EXPECT_DOUBLE_EQ(stats[0].mean_score, 2.0);
  EXPECT_DOUBLE_EQ(stats[0].stddev, 0.0);
}

TEST(ScoreHistogram, DirectBinning) {
  const std::vector<double> scores = {1, 2, 2, 5};
  const auto h = score_histogram(scores, {0.5, 1.5, 2.5, 3.5, 4.5, 5.5});
  EXPECT_EQ(h.counts, (std::vector<std::int64_t>{1, 2, 0, 0, 1}));
}

TEST(ScoreHistogram, EmptyInputGivesZeroCounts) {
  const auto h = score_histogram({}, {0.5, 1.5, 2.5});
  EXPECT_EQ(h.counts, (std::vector<std::int64_t>{0, 0}));
}

TEST(ScoreHistogram, IntegerCenteredEdgesRoundToNearest) {
  const std::vector<double> scores = {2.4, 2.6};
  const auto h = score_histogram(scores, integer_centered_edges());
  EXPECT_EQ(h.counts, (std::vector<std::int64_t>{0, 1, 1, 0, 0}));
}

TEST(ScoreHistogram, LastBinClosed) {
  const std::vector<double> scores = {5.5};
  const auto h = score_histogram(scores, integer_centered_edges());
  EXPECT_EQ(h.counts.back(), 1);
}

TEST(ScoreHistogram, RejectsOutOfRange) {
  EXPECT_THROW(score_histogram(std::vector<double>{6.0},
                               integer_centered_edges()),
               DataError);
}

TEST(ScoreHistogram, CountsSumToInputSize) {
  Rng rng(5);
  const auto scores = random_sample(rng, 500, 1.0, 5.0);
  const auto h = score_histogram(scores, integer_centered_edges());
  std::int64_t total = 0;
  for (auto c : h.counts) total += c;
  EXPECT_EQ(total, static_cast<std::int64_t>(scores.size()));
}

TEST(Emd, IdenticalEmpiricalDistributionsAreZero) {
  EXPECT_DOUBLE_EQ(emd(std::vector<double>{1, 1}, std::vector<double>{1}), 0.0);
  EXPECT_DOUBLE_EQ(
      emd(std::vector<double>{2, 3, 2, 3}, std::vector<double>{3, 2}), 0.0);
}

TEST(Emd, WorkedExamples) {
  EXPECT_DOUBLE_EQ(emd(std::vector<double>{1, 2, 3}, std::vector<double>{2, 3, 4}),
                   1.0);
  EXPECT_DOUBLE_EQ(emd(std::vector<double>{1, 3}, std::vector<double>{2}), 1.0);
}

TEST(Emd, RejectsEmptySample) {
  EXPECT_THROW(emd(std::vector<double>{}, std::vector<double>{1}), DataError);
}

TEST(Emd, MatchesTransportOracleOnSmallSamples) {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_sample(rng, 8, 1.0, 5.0);
    const auto b = random_sample(rng, 8, 1.0, 5.0);
    EXPECT_NEAR(emd(a, b), testing::transport_emd_oracle(a, b), 1e-9);
  }
}

TEST(Emd, EqualSizeSamplesEqualMeanSortedGap) {
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng.below(20);
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = rng.uniform(1.0, 5.0);
    for (auto& x : b) x = rng.uniform(1.0, 5.0);
    auto sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double expected = 0.0;
    for (std::size_t k = 0; k < n; ++k) expected += std::abs(sa[k] - sb[k]);
    expected /= static_cast<double>(n);
    EXPECT_NEAR(emd(a, b), expected, 1e-12);
  }
}

TEST(Emd, MetricAxioms) {
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_sample(rng, 10, 1.0, 5.0);
    const auto b = random_sample(rng, 10, 1.0, 5.0);
    const auto c = random_sample(rng, 10, 1.0, 5.0);
    const double ab = emd(a, b);
    const double ba = emd(b, a);
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_NEAR(emd(a, a), 0.0, 0.0);
    EXPECT_LE(emd(a, c), ab + emd(b, c) + 1e-12);  // triangle inequality
  }
}

TEST(Emd, TranslationInvarianceAndScaling) {
  Rng rng(37);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_sample(rng, 12, 1.0, 5.0);
    const auto b = random_sample(rng, 12, 1.0, 5.0);
    const double base = emd(a, b);
    const double shift = rng.uniform(-3.0, 3.0);
    const double scale = rng.uniform(0.1, 4.0);
    auto at = a, bt = b, as = a, bs = b;
    for (auto& x : at) x += shift;
    for (auto& x : bt) x += shift;
    for (auto& x : as) x *= scale;
    for (auto& x : bs) x *= scale;
    EXPECT_NEAR(emd(at, bt), base, 1e-9);
    EXPECT_NEAR(emd(as, bs), scale * base, 1e-9 * (1.0 + scale));
  }
}

// A fixed 6-utterance corpus with a fixed partition, small enough to compose
// the objective by hand from individual emd calls.
class SplitObjectiveFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    corpus_ = testing::make_corpus(
        {{"u1", "s1", "p1", "t1"},
         {"u2", "s1", "p1", "t2"},
         {"u3", "s2", "p2", "t3"},
         {"u4", "s2", "p2", "t4"},
         {"u5", "s3", "p3", "t5"},
         {"u6", "s3", "p3", "t6"}},
        {{"u1", "a", 1}, {"u1", "b", 2},
         {"u2", "a", 3}, {"u2", "b", 3},
         {"u3", "a", 4}, {"u3", "b", 5},
         {"u4", "a", 2}, {"u4", "b", 4},
         {"u5", "a", 5}, {"u5", "b", 5},
         {"u6", "a", 1}, {"u6", "b", 4}});
    assignment_.subset_of = {{"u1", Subset::train}, {"u2", Subset::train},
                             {"u3", Subset::train}, {"u4", Subset::train},
                             {"u5", Subset::dev},   {"u6", Subset::test}};
  }

  Corpus corpus_;
  SplitAssignment assignment_;
};

TEST_F(SplitObjectiveFixture, MatchesHandComposition) {
  const std::vector<double> all = {1, 2, 3, 3, 4, 5, 2, 4, 5, 5, 1, 4};
  const std::vector<double> train = {1, 2, 3, 3, 4, 5, 2, 4};
  const std::vector<double> dev = {5, 5};
  const std::vector<double> test = {1, 4};
  auto sd = [](double a, double b) {
    const double m = (a + b) / 2;
    return std::sqrt((a - m) * (a - m) + (b - m) * (b - m));  // n-1 = 1
  };
  const std::vector<double> all_sd = {sd(1, 2), sd(3, 3), sd(4, 5),
                                      sd(2, 4), sd(5, 5), sd(1, 4)};
  const std::vector<double> train_sd = {sd(1, 2), sd(3, 3), sd(4, 5), sd(2, 4)};
  const std::vector<double> dev_sd = {sd(5, 5)};
  const std::vector<double> test_sd = {sd(1, 4)};

  const double expected = emd(train, all) + emd(dev, all) + emd(test, all) +
                          emd(train_sd, all_sd) + emd(dev_sd, all_sd) +
                          emd(test_sd, all_sd);
  SplitObjectiveConfig cfg;
  EXPECT_NEAR(split_objective(corpus_, assignment_, cfg), expected, 1e-12);
}

TEST_F(SplitObjectiveFixture, StddevFlagDropsStddevTerms) {
  const std::vector<double> all = {1, 2, 3, 3, 4, 5, 2, 4, 5, 5, 1, 4};
  const std::vector<double> train = {1, 2, 3, 3, 4, 5, 2, 4};
  const std::vector<double> dev = {5, 5};
  const std::vector<double> test = {1, 4};
  const double expected = emd(train, all) + emd(dev, all) + emd(test, all);
  SplitObjectiveConfig cfg;
  cfg.include_stddev_term = false;
  EXPECT_NEAR(split_objective(corpus_, assignment_, cfg), expected, 1e-12);
}

TEST_F(SplitObjectiveFixture, RejectsEmptySubset) {
  assignment_.subset_of["u5"] = Subset::train;  // dev now empty
  EXPECT_THROW(split_objective(corpus_, assignment_, SplitObjectiveConfig{}),
               DataError);
}

TEST_F(SplitObjectiveFixture, RejectsPartialCoverage) {
  assignment_.subset_of.erase("u1");
  EXPECT_THROW(split_objective(corpus_, assignment_, SplitObjectiveConfig{}),
               DataError);
}

TEST(SplitObjective, ZeroWhenSubsetsReplicateGlobalDistribution) {
  // Every utterance carries the same rating multiset {2,4}, so any partition
  // replicates the global distribution exactly and all terms vanish.
  std::vector<std::array<std::string, 4>> utts;
  std::vector<std::tuple<std::string, std::string, double>> ratings;
  for (int i = 0; i < 9; ++i) {
    const std::string id = "u" + std::to_string(i);
    utts.push_back({id, "s1", "p1", "t1"});
    ratings.emplace_back(id, "a", 2.0);
    ratings.emplace_back(id, "b", 4.0);
  }
  const Corpus corpus = testing::make_corpus(utts, ratings);
  SplitAssignment assignment;
  for (int i = 0; i < 9; ++i) {
    assignment.subset_of["u" + std::to_string(i)] =
        i < 5 ? Subset::train : (i < 7 ? Subset::dev : Subset::test);
  }
  EXPECT_DOUBLE_EQ(
      split_objective(corpus, assignment, SplitObjectiveConfig{}), 0.0);
}

TEST(SplitObjective, ExcludesDroppedRatings) {
  const Corpus corpus = testing::make_corpus(
      {{"u1", "s1", "p1", "t1"}, {"u2", "s1", "p1", "t2"},
       {"u3", "s1", "p1", "t3"}},
      {{"u1", "a", 1}, {"u1", "b", 3}, {"u2", "a", 3}, {"u2", "b", 3},
       {"u3", "a", 3}, {"u3", "b", 5}});
  SplitAssignment assignment;
  assignment.subset_of = {{"u1", Subset::train},
                          {"u2", Subset::dev},
                          {"u3", Subset::test}};
  assignment.dropped_ratings = {{"u1", "a"}, {"u3", "b"}};
  // Retained: u1 -> {3}, u2 -> {3,3}, u3 -> {3}.  All score distributions
  // collapse onto {3} and all stddevs onto {0}: objective must be 0.
  EXPECT_DOUBLE_EQ(
      split_objective(corpus, assignment, SplitObjectiveConfig{}), 0.0);
}

}  // namespace
}  // namespace moseval

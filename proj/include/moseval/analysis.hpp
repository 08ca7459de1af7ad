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

#ifndef MOSEVAL_ANALYSIS_HPP_
#define MOSEVAL_ANALYSIS_HPP_

#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "moseval/metrics.hpp"
#include "moseval/split_types.hpp"
#include "moseval/stats.hpp"

namespace moseval {

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

namespace detail {

// Continued fraction for the incomplete beta function, modified Lentz
// algorithm.  Converges in a few dozen iterations for the arguments the
// t-distribution produces.
inline double incomplete_beta_cf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 3e-16;
  constexpr int kMaxIter = 500;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw DataError("incomplete beta did not converge (a=" +
                  std::to_string(a) + ", b=" + std::to_string(b) + ")");
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b).
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DataError("regularized_incomplete_beta: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DataError("regularized_incomplete_beta: x must lie in [0,1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) -
                           (std::lgamma(a) + std::lgamma(b) -
                            std::lgamma(a + b));
  // Use the continued fraction on the side where it converges fastest.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * detail::incomplete_beta_cf(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * detail::incomplete_beta_cf(b, a, 1.0 - x) / b;
}

/// Two-sided p-value of a t statistic: P(|T_df| >= |t|), which reduces to
/// I_{df/(df+t^2)}(df/2, 1/2).
inline double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw DataError("t-test degrees of freedom must be > 0");
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

// ---------------------------------------------------------------------------
// Welch's t-test
// ---------------------------------------------------------------------------

struct TTestResult {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double std_a = 0.0;
  double std_b = 0.0;
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  bool significant = false;
  double alpha = 0.05;
  // Set when both samples are constant and equal: t is 0/0 there, and the
  // result is pinned to t = 0, p = 1 instead of NaN.
  bool degenerate = false;
};

/// Two-sided Welch (unequal-variance) t-test with Welch-Satterthwaite
/// degrees of freedom.
inline TTestResult welch_t_test(std::span<const double> a,
                                std::span<const double> b, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DataError("alpha must lie strictly between 0 and 1");
  }
  if (a.size() < 2 || b.size() < 2) {
    throw DataError("welch_t_test: each sample needs at least 2 values (got " +
                    std::to_string(a.size()) + " and " +
                    std::to_string(b.size()) + ")");
  }

  TTestResult r;
  r.alpha = alpha;
  r.mean_a = detail::sample_mean(a);
  r.mean_b = detail::sample_mean(b);
  r.std_a = detail::sample_stddev(a, r.mean_a);
  r.std_b = detail::sample_stddev(b, r.mean_b);

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = r.std_a * r.std_a / na;
  const double vb = r.std_b * r.std_b / nb;

  if (va + vb == 0.0) {
    if (r.mean_a != r.mean_b) {
      throw DataError(
          "welch_t_test: both samples are constant; at least one must vary");
    }
    r.t_statistic = 0.0;
    r.degrees_of_freedom = na + nb - 2.0;
    r.p_value = 1.0;
    r.significant = false;
    r.degenerate = true;
    return r;
  }

  r.t_statistic = (r.mean_a - r.mean_b) / std::sqrt(va + vb);
  r.degrees_of_freedom = (va + vb) * (va + vb) /
                         (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  r.p_value = student_t_two_sided_p(r.t_statistic, r.degrees_of_freedom);
  r.significant = r.p_value <= alpha;
  return r;
}

// ---------------------------------------------------------------------------
// Seen/unseen-category error analysis
// ---------------------------------------------------------------------------

enum class Category { speaker, system, text, listener };

inline const char* category_name(Category c) {
  switch (c) {
    case Category::speaker: return "speaker";
    case Category::system: return "system";
    case Category::text: return "text";
    case Category::listener: return "listener";
  }
  return "?";
}

inline Category category_from_name(const std::string& name) {
  if (name == "speaker") return Category::speaker;
  if (name == "system") return Category::system;
  if (name == "text") return Category::text;
  if (name == "listener") return Category::listener;
  throw DataError("category must be speaker|system|text|listener, got '" +
                  name + "'");
}

struct ErrorPartition {
  std::vector<double> seen;
  std::vector<double> unseen;
};

/// Splits the per-utterance squared errors of one subset into seen/unseen
/// lists for a category.  For speaker/system/text, an utterance is unseen
/// iff its entity is designated unseen for that subset.  The listener
/// category applies only when every analyzed utterance has exactly one
/// retained rating; it is unseen iff the sole rater is designated unseen.
inline ErrorPartition squared_errors_by_category(const Corpus& corpus,
                                                 const SplitAssignment& split,
                                                 const PredictionSet& pred,
                                                 Subset subset,
                                                 Category category) {
  const CorpusIndex index(corpus);
  const DroppedSet dropped(split.dropped_ratings);
  const auto stats = utterance_stats(index, dropped);
  const UnseenEntities& designated = split.unseen(subset);

  const std::vector<std::string>* unseen_ids = nullptr;
  switch (category) {
    case Category::speaker: unseen_ids = &designated.speakers; break;
    case Category::system: unseen_ids = &designated.systems; break;
    case Category::text: unseen_ids = &designated.texts; break;
    case Category::listener: unseen_ids = &designated.listeners; break;
  }
  const std::unordered_set<std::string> unseen_set(unseen_ids->begin(),
                                                   unseen_ids->end());

  ErrorPartition out;
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
    const auto& u = corpus.utterances[i];
    const auto it = split.subset_of.find(u.utterance_id);
    if (it == split.subset_of.end()) {
      throw DataError("analysis: utterance '" + u.utterance_id +
                      "' is unassigned");
    }
    if (it->second != subset) continue;

    const auto pit = pred.find(u.utterance_id);
    if (pit == pred.end()) {
      missing.push_back(u.utterance_id);
      continue;
    }
    const double err = pit->second - stats[i].mean_score;
    const double sq = err * err;

    bool unseen = false;
    switch (category) {
      case Category::speaker: unseen = unseen_set.count(u.speaker_id); break;
      case Category::system: unseen = unseen_set.count(u.system_id); break;
      case Category::text: unseen = unseen_set.count(u.text_id); break;
      case Category::listener: {
        // Mirror of the single-rater restriction: with multiple raters an
        // utterance has no single listener identity.
        const std::string* rater = nullptr;
        int retained = 0;
        for (std::size_t row : index.rating_rows(i)) {
          const Rating& r = corpus.ratings[row];
          if (dropped.contains(r.utterance_id, r.listener_id)) continue;
          ++retained;
          rater = &r.listener_id;
        }
        if (retained != 1) {
          throw DataError(
              "listener analysis requires exactly one retained rating per "
              "utterance; '" +
              u.utterance_id + "' has " + std::to_string(retained));
        }
        unseen = unseen_set.count(*rater);
        break;
      }
    }
    (unseen ? out.unseen : out.seen).push_back(sq);
  }
  if (!missing.empty()) {
    throw DataError("analysis: predictions missing for subset '" +
                    std::string(subset_name(subset)) +
                    "': " + detail::list_ids(missing));
  }
  return out;
}

struct SampleSummary {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

inline SampleSummary summarize(std::span<const double> v) {
  SampleSummary s;
  s.count = v.size();
  if (v.empty()) return s;
  s.mean = detail::sample_mean(v);
  s.stddev = detail::sample_stddev(v, s.mean);
  return s;
}

struct CategoryAnalysis {
  Category category = Category::speaker;
  SampleSummary seen;
  SampleSummary unseen;
  TTestResult t_test;  // a = seen errors, b = unseen errors
  // Unseen mean squared error is higher AND the difference is significant.
  bool unseen_harder = false;
};

struct UnseenAnalysis {
  Subset subset = Subset::test;
  double alpha = 0.05;
  std::vector<CategoryAnalysis> categories;
};

/// Per-category seen/unseen squared-error comparison over one subset.
inline UnseenAnalysis unseen_report(const Corpus& corpus,
                                    const SplitAssignment& split,
                                    const PredictionSet& pred, Subset subset,
                                    const std::vector<Category>& categories,
                                    double alpha) {
  UnseenAnalysis out;
  out.subset = subset;
  out.alpha = alpha;
  for (Category category : categories) {
    const ErrorPartition part =
        squared_errors_by_category(corpus, split, pred, subset, category);
    if (part.seen.size() < 2 || part.unseen.size() < 2) {
      throw DataError(std::string("category ") + category_name(category) +
                      ": need at least 2 seen and 2 unseen errors (got " +
                      std::to_string(part.seen.size()) + " seen, " +
                      std::to_string(part.unseen.size()) + " unseen)");
    }
    CategoryAnalysis ca;
    ca.category = category;
    ca.seen = summarize(part.seen);
    ca.unseen = summarize(part.unseen);
    ca.t_test = welch_t_test(part.seen, part.unseen, alpha);
    ca.unseen_harder =
        ca.unseen.mean > ca.seen.mean && ca.t_test.significant;
    out.categories.push_back(std::move(ca));
  }
  return out;
}

}  // namespace moseval

#endif  // MOSEVAL_ANALYSIS_HPP_

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

#ifndef MOSEVAL_STATS_HPP_
#define MOSEVAL_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "moseval/corpus.hpp"
#include "moseval/split_types.hpp"

namespace moseval {

// ---------------------------------------------------------------------------
// Per-utterance aggregates
// ---------------------------------------------------------------------------

struct UtteranceStats {
  std::string utterance_id;
  double mean_score = 0.0;
  double stddev = 0.0;  // sample stddev (n-1); 0 when a single rating
  int rating_count = 0;
};

namespace detail {

inline double sample_mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

// Sample standard deviation with the n-1 denominator; 0 for n = 1.
inline double sample_stddev(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace detail

/// One entry per utterance, in corpus order; `dropped` ratings are excluded
/// from the aggregation.  An utterance left with no retained ratings is an
/// error because its mean is undefined.
inline std::vector<UtteranceStats> utterance_stats(const CorpusIndex& index,
                                                   const DroppedSet& dropped) {
  const Corpus& corpus = index.corpus();
  std::vector<UtteranceStats> out;
  out.reserve(corpus.utterances.size());
  std::vector<double> scores;
  for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
    const auto& u = corpus.utterances[i];
    scores.clear();
    for (std::size_t row : index.rating_rows(i)) {
      const Rating& r = corpus.ratings[row];
      if (dropped.contains(r.utterance_id, r.listener_id)) continue;
      scores.push_back(r.score);
    }
    if (scores.empty()) {
      throw DataError("utterance '" + u.utterance_id +
                      "' has no retained ratings");
    }
    UtteranceStats s;
    s.utterance_id = u.utterance_id;
    s.rating_count = static_cast<int>(scores.size());
    s.mean_score = detail::sample_mean(scores);
    s.stddev = detail::sample_stddev(scores, s.mean_score);
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<UtteranceStats> utterance_stats(const Corpus& corpus) {
  return utterance_stats(CorpusIndex(corpus), DroppedSet());
}

inline std::vector<UtteranceStats> utterance_stats(
    const Corpus& corpus, const SplitAssignment& assignment) {
  return utterance_stats(CorpusIndex(corpus),
                         DroppedSet(assignment.dropped_ratings));
}

// ---------------------------------------------------------------------------
// Histograms
// ---------------------------------------------------------------------------

struct Histogram {
  std::vector<double> bin_edges;   // strictly increasing, size = bins + 1
  std::vector<std::int64_t> counts;
};

/// Integer-centered edges 0.5, 1.5, ..., 5.5: binning with these reproduces
/// nearest-integer rounding of scores in [1,5].
inline std::vector<double> integer_centered_edges() {
  return {0.5, 1.5, 2.5, 3.5, 4.5, 5.5};
}

/// Bins are half-open [e_i, e_{i+1}); the last bin also includes its upper
/// edge.  Scores outside [first_edge, last_edge] are an error.
inline Histogram score_histogram(std::span<const double> scores,
                                 std::vector<double> bin_edges) {
  if (bin_edges.size() < 2) {
    throw DataError("histogram needs at least two bin edges");
  }
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    if (!(bin_edges[i - 1] < bin_edges[i])) {
      throw DataError("histogram bin edges must be strictly increasing");
    }
  }
  Histogram h;
  h.counts.assign(bin_edges.size() - 1, 0);
  for (double x : scores) {
    if (x < bin_edges.front() || x > bin_edges.back()) {
      std::ostringstream msg;
      msg << "score " << x << " outside histogram range ["
          << bin_edges.front() << "," << bin_edges.back() << "]";
      throw DataError(msg.str());
    }
    if (x == bin_edges.back()) {
      ++h.counts.back();
      continue;
    }
    const auto it =
        std::upper_bound(bin_edges.begin(), bin_edges.end(), x);
    ++h.counts[static_cast<std::size_t>(it - bin_edges.begin()) - 1];
  }
  h.bin_edges = std::move(bin_edges);
  return h;
}

// ---------------------------------------------------------------------------
// Earth-mover's distance
// ---------------------------------------------------------------------------

namespace detail {

// Exact 1-Wasserstein distance between the empirical distributions of two
// sorted samples: the integral of |F_a - F_b| over the merged breakpoints.
// Handles unequal sample counts; O(n + m) after sorting.
inline double emd_sorted(std::span<const double> a, std::span<const double> b) {
  const double wa = 1.0 / static_cast<double>(a.size());
  const double wb = 1.0 / static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double fa = 0.0, fb = 0.0;
  double prev = std::min(a.front(), b.front());
  double total = 0.0;
  while (i < a.size() || j < b.size()) {
    double v;
    if (i < a.size() && (j == b.size() || a[i] <= b[j])) {
      v = a[i];
    } else {
      v = b[j];
    }
    total += std::abs(fa - fb) * (v - prev);
    while (i < a.size() && a[i] == v) {
      fa += wa;
      ++i;
    }
    while (j < b.size() && b[j] == v) {
      fb += wb;
      ++j;
    }
    prev = v;
  }
  return total;
}

}  // namespace detail

/// Earth-mover's (1-Wasserstein) distance between two empirical
/// distributions, exact for weighted point masses.  Symmetric, and zero
/// exactly when the two empirical distributions coincide.
inline double emd(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DataError("emd: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return detail::emd_sorted(sa, sb);
}

// ---------------------------------------------------------------------------
// Split balance objective
// ---------------------------------------------------------------------------

struct SplitObjectiveConfig {
  // The stddev terms are dropped for corpora where most utterances carry a
  // single rating, which would make the stddev distribution degenerate.
  bool include_stddev_term = true;
};

/// Sum over train/dev/test of EMD(subset's retained individual scores, full
/// corpus's retained scores), plus, when enabled, the same sum over the
/// per-utterance rating stddevs.  Dropped ratings are excluded on both sides.
inline double split_objective(const CorpusIndex& index,
                              const SplitAssignment& assignment,
                              const SplitObjectiveConfig& cfg) {
  const Corpus& corpus = index.corpus();
  if (assignment.subset_of.size() != corpus.utterances.size()) {
    throw DataError("split objective: assignment does not cover the corpus (" +
                    std::to_string(assignment.subset_of.size()) + " of " +
                    std::to_string(corpus.utterances.size()) +
                    " utterances assigned)");
  }

  const DroppedSet dropped(assignment.dropped_ratings);
  std::array<std::vector<double>, 3> subset_scores;
  std::vector<double> all_scores;
  std::array<std::vector<double>, 3> subset_stddevs;
  std::vector<double> all_stddevs;

  std::vector<double> scores;
  for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
    const auto& u = corpus.utterances[i];
    const auto it = assignment.subset_of.find(u.utterance_id);
    if (it == assignment.subset_of.end()) {
      throw DataError("split objective: utterance '" + u.utterance_id +
                      "' is not assigned to any subset");
    }
    const auto subset = static_cast<std::size_t>(it->second);
    scores.clear();
    for (std::size_t row : index.rating_rows(i)) {
      const Rating& r = corpus.ratings[row];
      if (dropped.contains(r.utterance_id, r.listener_id)) continue;
      scores.push_back(r.score);
    }
    if (scores.empty()) {
      throw DataError("split objective: utterance '" + u.utterance_id +
                      "' has no retained ratings");
    }
    for (double s : scores) {
      subset_scores[subset].push_back(s);
      all_scores.push_back(s);
    }
    const double mean = detail::sample_mean(scores);
    const double sd = detail::sample_stddev(scores, mean);
    subset_stddevs[subset].push_back(sd);
    all_stddevs.push_back(sd);
  }

  for (Subset s : kSubsets) {
    if (subset_scores[static_cast<std::size_t>(s)].empty()) {
      throw DataError(std::string("split objective: subset '") +
                      subset_name(s) + "' is empty");
    }
  }

  std::sort(all_scores.begin(), all_scores.end());
  std::sort(all_stddevs.begin(), all_stddevs.end());
  double total = 0.0;
  for (auto& v : subset_scores) {
    std::sort(v.begin(), v.end());
    total += detail::emd_sorted(v, all_scores);
  }
  if (cfg.include_stddev_term) {
    for (auto& v : subset_stddevs) {
      std::sort(v.begin(), v.end());
      total += detail::emd_sorted(v, all_stddevs);
    }
  }
  return total;
}

inline double split_objective(const Corpus& corpus,
                              const SplitAssignment& assignment,
                              const SplitObjectiveConfig& cfg) {
  return split_objective(CorpusIndex(corpus), assignment, cfg);
}

}  // namespace moseval

#endif  // MOSEVAL_STATS_HPP_

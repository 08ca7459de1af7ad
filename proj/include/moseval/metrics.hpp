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

#ifndef MOSEVAL_METRICS_HPP_
#define MOSEVAL_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "moseval/csv.hpp"
#include "moseval/split_types.hpp"
#include "moseval/stats.hpp"

namespace moseval {

// Predicted MOS per utterance.  An ordered map so that iteration (and
// therefore every serialized output) is deterministic.
using PredictionSet = std::map<std::string, double>;

// ---------------------------------------------------------------------------
// Scalar metrics.  Correlations return nullopt on degenerate (constant-rank)
// input instead of a number: a silent 0 or 1 would corrupt comparisons.
// ---------------------------------------------------------------------------

namespace detail {

inline void require_paired(std::span<const double> a, std::span<const double> b,
                           std::size_t min_len, const char* what) {
  if (a.size() != b.size()) {
    throw DataError(std::string(what) + ": length mismatch (" +
                    std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
  if (a.size() < min_len) {
    throw DataError(std::string(what) + ": needs at least " +
                    std::to_string(min_len) + " pairs, got " +
                    std::to_string(a.size()));
  }
}

// Counts pairs i < j with v[i] > v[j] by merge sort.
inline std::uint64_t count_inversions(std::vector<double>& v,
                                      std::vector<double>& scratch,
                                      std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(v, scratch, lo, mid) +
                      count_inversions(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += mid - i;
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, v.begin() + lo);
  return inv;
}

template <typename Less>
inline std::uint64_t tied_pairs(std::vector<double> v, Less less) {
  std::sort(v.begin(), v.end(), less);
  std::uint64_t ties = 0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && !less(v[i], v[j]) && !less(v[j], v[i])) ++j;
    const std::uint64_t run = j - i;
    ties += run * (run - 1) / 2;
    i = j;
  }
  return ties;
}

}  // namespace detail

inline double mse(std::span<const double> truth, std::span<const double> pred) {
  detail::require_paired(truth, pred, 1, "mse");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = pred[i] - truth[i];
    sum += d * d;
  }
  return sum / static_cast<double>(truth.size());
}

inline std::optional<double> pearson(std::span<const double> x,
                                     std::span<const double> y) {
  detail::require_paired(x, y, 2, "pearson");
  const double mx = detail::sample_mean(x);
  const double my = detail::sample_mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;  // constant input
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

/// Average ranks, 1-based; ties share the mean of their rank range.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of i+1..j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

inline std::optional<double> spearman(std::span<const double> x,
                                      std::span<const double> y) {
  detail::require_paired(x, y, 2, "spearman");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

/// Kendall tau-b: (C - D) / sqrt((C+D+Tx)(C+D+Ty)), with Tx/Ty counting pairs
/// tied in only one vector.  Computed in O(n log n) via Knight's algorithm:
/// sort by (x, y), then discordant pairs are inversions of the y sequence.
inline std::optional<double> kendall_tau(std::span<const double> x,
                                         std::span<const double> y) {
  detail::require_paired(x, y, 2, "kendall_tau");
  const std::size_t n = x.size();
  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  // Pairs tied in x, and jointly tied pairs, from runs of the sorted order.
  std::uint64_t ties_x = 0, ties_xy = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    const std::uint64_t run = j - i;
    ties_x += run * (run - 1) / 2;
    std::size_t k = i;
    while (k < j) {
      std::size_t m = k;
      while (m < j && y[order[m]] == y[order[k]]) ++m;
      const std::uint64_t jrun = m - k;
      ties_xy += jrun * (jrun - 1) / 2;
      k = m;
    }
    i = j;
  }
  const std::uint64_t ties_y =
      detail::tied_pairs(std::vector<double>(y.begin(), y.end()),
                         std::less<double>());

  if (n0 == ties_x || n0 == ties_y) return std::nullopt;  // a constant vector

  std::vector<double> y_seq(n);
  for (std::size_t k = 0; k < n; ++k) y_seq[k] = y[order[k]];
  std::vector<double> scratch(n);
  const std::uint64_t discordant =
      detail::count_inversions(y_seq, scratch, 0, n);

  // C - D = n0 - Tx - Ty + Txy - 2D, with Tx/Ty counting all x-/y-ties.
  const double numer = static_cast<double>(n0) - static_cast<double>(ties_x) -
                       static_cast<double>(ties_y) +
                       static_cast<double>(ties_xy) -
                       2.0 * static_cast<double>(discordant);
  const double denom = std::sqrt(static_cast<double>(n0 - ties_x)) *
                       std::sqrt(static_cast<double>(n0 - ties_y));
  return std::clamp(numer / denom, -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Utterance- and system-level evaluation
// ---------------------------------------------------------------------------

enum class Level { utterance, system };

inline const char* level_name(Level level) {
  return level == Level::utterance ? "utterance" : "system";
}

struct EvaluationReport {
  Level level = Level::utterance;
  std::size_t n = 0;  // scored pairs (utterances or systems)
  double mse = 0.0;
  std::optional<double> lcc;
  std::optional<double> srcc;
  std::optional<double> ktau;
};

struct SystemPair {
  std::string system_id;
  double true_mos = 0.0;
  double pred_mos = 0.0;
};

/// Per-system averages of true per-utterance MOS and predictions, over the
/// utterances present in `pred`.  Output sorted by system id.
inline std::vector<SystemPair> system_aggregate(
    const std::vector<UtteranceStats>& stats, const PredictionSet& pred,
    const std::unordered_map<std::string, std::string>& system_of) {
  std::unordered_map<std::string, const UtteranceStats*> by_id;
  by_id.reserve(stats.size());
  for (const auto& s : stats) by_id.emplace(s.utterance_id, &s);

  struct Acc {
    double true_sum = 0.0;
    double pred_sum = 0.0;
    std::size_t count = 0;
  };
  std::map<std::string, Acc> acc;
  for (const auto& [utt, value] : pred) {
    const auto stat_it = by_id.find(utt);
    const auto sys_it = system_of.find(utt);
    if (stat_it == by_id.end() || sys_it == system_of.end()) {
      throw DataError("prediction for unknown utterance '" + utt + "'");
    }
    Acc& a = acc[sys_it->second];
    a.true_sum += stat_it->second->mean_score;
    a.pred_sum += value;
    ++a.count;
  }
  std::vector<SystemPair> out;
  out.reserve(acc.size());
  for (const auto& [sys, a] : acc) {
    out.push_back(SystemPair{sys, a.true_sum / a.count, a.pred_sum / a.count});
  }
  return out;
}

namespace detail {

inline std::string list_ids(const std::vector<std::string>& ids,
                            std::size_t limit = 10) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i > 0) out << ", ";
    out << ids[i];
  }
  if (ids.size() > limit) out << ", ... (" << ids.size() << " total)";
  return out.str();
}

inline EvaluationReport report_from_pairs(std::span<const double> truth,
                                          std::span<const double> pred,
                                          Level level) {
  EvaluationReport report;
  report.level = level;
  report.n = truth.size();
  report.mse = mse(truth, pred);
  if (truth.size() >= 2) {
    report.lcc = pearson(truth, pred);
    report.srcc = spearman(truth, pred);
    report.ktau = kendall_tau(truth, pred);
  }
  return report;
}

}  // namespace detail

/// Scores predictions against one subset of a split.  The prediction set must
/// cover exactly that subset's utterances.  Truth is the mean of the retained
/// ratings; at system level both sides are averaged per system first.
inline EvaluationReport evaluate(const Corpus& corpus,
                                 const SplitAssignment& assignment,
                                 Subset subset, const PredictionSet& pred,
                                 Level level) {
  const CorpusIndex index(corpus);
  const auto stats =
      utterance_stats(index, DroppedSet(assignment.dropped_ratings));

  std::vector<const Utterance*> members;
  for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
    const auto& u = corpus.utterances[i];
    const auto it = assignment.subset_of.find(u.utterance_id);
    if (it == assignment.subset_of.end()) {
      throw DataError("evaluate: utterance '" + u.utterance_id +
                      "' is unassigned");
    }
    if (it->second == subset) members.push_back(&u);
  }
  if (members.empty()) {
    throw DataError(std::string("evaluate: subset '") + subset_name(subset) +
                    "' is empty");
  }

  std::vector<std::string> missing, extra;
  for (const auto* u : members) {
    if (!pred.count(u->utterance_id)) missing.push_back(u->utterance_id);
  }
  std::unordered_set<std::string> member_ids;
  for (const auto* u : members) member_ids.insert(u->utterance_id);
  for (const auto& [id, value] : pred) {
    (void)value;
    if (!member_ids.count(id)) extra.push_back(id);
  }
  if (!missing.empty() || !extra.empty()) {
    std::ostringstream msg;
    msg << "evaluate: predictions do not cover subset '"
        << subset_name(subset) << "' exactly";
    if (!missing.empty()) msg << "; missing: " << detail::list_ids(missing);
    if (!extra.empty()) msg << "; extra: " << detail::list_ids(extra);
    throw DataError(msg.str());
  }

  if (level == Level::utterance) {
    std::vector<double> truth, predicted;
    truth.reserve(members.size());
    predicted.reserve(members.size());
    for (const auto* u : members) {
      truth.push_back(stats[index.utterance_pos(u->utterance_id)].mean_score);
      predicted.push_back(pred.at(u->utterance_id));
    }
    return detail::report_from_pairs(truth, predicted, level);
  }

  std::unordered_map<std::string, std::string> system_of;
  system_of.reserve(members.size());
  for (const auto* u : members) system_of.emplace(u->utterance_id, u->system_id);
  const auto pairs = system_aggregate(stats, pred, system_of);
  std::vector<double> truth, predicted;
  truth.reserve(pairs.size());
  predicted.reserve(pairs.size());
  for (const auto& p : pairs) {
    truth.push_back(p.true_mos);
    predicted.push_back(p.pred_mos);
  }
  return detail::report_from_pairs(truth, predicted, level);
}

// ---------------------------------------------------------------------------
// Prediction file I/O: utterance_id,prediction
// ---------------------------------------------------------------------------

inline PredictionSet load_predictions(const std::filesystem::path& path) {
  const CsvFile csv = read_csv(path, {"utterance_id", "prediction"});
  PredictionSet out;
  for (const auto& row : csv.rows) {
    const double value = parse_double_field(row.fields[1], path, row.line);
    if (!std::isfinite(value)) {
      throw DataError(path.string() + ":" + std::to_string(row.line) +
                      ": prediction must be finite");
    }
    if (!out.emplace(row.fields[0], value).second) {
      throw DataError(path.string() + ":" + std::to_string(row.line) +
                      ": duplicate prediction for '" + row.fields[0] + "'");
    }
  }
  return out;
}

inline void save_predictions(const PredictionSet& pred,
                             const std::filesystem::path& path) {
  std::string csv = "utterance_id,prediction\n";
  for (const auto& [id, value] : pred) {
    csv += id;
    csv += ',';
    csv += format_double(value);
    csv += '\n';
  }
  write_text_file(path, csv);
}

}  // namespace moseval

#endif  // MOSEVAL_METRICS_HPP_

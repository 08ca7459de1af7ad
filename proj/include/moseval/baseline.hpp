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

#ifndef MOSEVAL_BASELINE_HPP_
#define MOSEVAL_BASELINE_HPP_

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "moseval/audio.hpp"
#include "moseval/metrics.hpp"
#include "moseval/splitter.hpp"
#include "moseval/stats.hpp"

namespace moseval {

// Non-neural reference predictors so the evaluate/analyze pipeline can run
// end-to-end without external model outputs.  Accuracy is not the point.

enum class BaselineKind { global_mean, linear_features };

inline BaselineKind baseline_kind_from_name(const std::string& name) {
  if (name == "global_mean") return BaselineKind::global_mean;
  if (name == "linear_features") return BaselineKind::linear_features;
  throw DataError("baseline kind must be global_mean|linear_features, got '" +
                  name + "'");
}

// Feature order is fixed: log duration, log RMS energy, zero-crossing rate.
inline constexpr int kBaselineFeatureCount = 3;

struct BaselineModel {
  BaselineKind kind = BaselineKind::global_mean;
  double global_mean = 0.0;
  std::array<double, kBaselineFeatureCount> weights = {0.0, 0.0, 0.0};
  double bias = 0.0;
};

/// log duration, log RMS energy (floored at 1e-10), and the fraction of
/// adjacent sample pairs with a strict sign change.
inline std::array<double, kBaselineFeatureCount> clip_features(
    const AudioClip& clip) {
  const std::size_t n = clip.samples.size();
  if (n == 0) throw DataError("clip_features: empty clip");
  double energy = 0.0;
  std::size_t sign_changes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    energy += clip.samples[i] * clip.samples[i];
    if (i > 0 && clip.samples[i - 1] * clip.samples[i] < 0.0) ++sign_changes;
  }
  const double rms = std::sqrt(energy / static_cast<double>(n));
  const double zcr =
      n > 1 ? static_cast<double>(sign_changes) / static_cast<double>(n - 1)
            : 0.0;
  return {std::log(clip.duration()), std::log(std::max(rms, 1e-10)), zcr};
}

namespace detail {

// Gaussian elimination with partial pivoting; the systems here are 4x4.
template <std::size_t N>
inline std::array<double, N> solve_linear(std::array<std::array<double, N>, N> a,
                                          std::array<double, N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < N; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (a[col][col] == 0.0) throw DataError("singular normal equations");
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, N> x{};
  for (std::size_t r = N; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < N; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

inline AudioClip load_utterance_audio(const Corpus& corpus,
                                      const Utterance& u) {
  if (corpus.wav_dir.empty() || u.audio_path.empty()) {
    throw DataError("baseline: utterance '" + u.utterance_id +
                    "' has no audio (linear_features needs waveforms)");
  }
  return read_wav(corpus.wav_dir / u.audio_path);
}

}  // namespace detail

/// Fits on the training subset of the split.  global_mean stores the mean of
/// the training per-utterance MOS; linear_features solves the ridge-damped
/// (lambda = 1e-6) least-squares problem in closed form.
inline BaselineModel fit_baseline(const Corpus& corpus,
                                  const SplitAssignment& assignment,
                                  BaselineKind kind) {
  const CorpusIndex index(corpus);
  const auto stats =
      utterance_stats(index, DroppedSet(assignment.dropped_ratings));

  std::vector<std::size_t> train_positions;
  for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
    const auto it =
        assignment.subset_of.find(corpus.utterances[i].utterance_id);
    if (it == assignment.subset_of.end()) {
      throw DataError("fit_baseline: utterance '" +
                      corpus.utterances[i].utterance_id + "' is unassigned");
    }
    if (it->second == Subset::train) train_positions.push_back(i);
  }
  if (train_positions.empty()) {
    throw DataError("fit_baseline: training subset is empty");
  }

  BaselineModel model;
  model.kind = kind;
  if (kind == BaselineKind::global_mean) {
    double sum = 0.0;
    for (std::size_t i : train_positions) sum += stats[i].mean_score;
    model.global_mean = sum / static_cast<double>(train_positions.size());
    return model;
  }

  constexpr std::size_t kDim = kBaselineFeatureCount + 1;  // bias last
  std::array<std::array<double, kDim>, kDim> ata{};
  std::array<double, kDim> atb{};
  for (std::size_t i : train_positions) {
    const auto f = clip_features(
        detail::load_utterance_audio(corpus, corpus.utterances[i]));
    std::array<double, kDim> row = {f[0], f[1], f[2], 1.0};
    for (std::size_t r = 0; r < kDim; ++r) {
      for (std::size_t c = 0; c < kDim; ++c) ata[r][c] += row[r] * row[c];
      atb[r] += row[r] * stats[i].mean_score;
    }
  }
  constexpr double kRidge = 1e-6;
  for (std::size_t r = 0; r < kDim; ++r) ata[r][r] += kRidge;
  const auto sol = detail::solve_linear<kDim>(ata, atb);
  model.weights = {sol[0], sol[1], sol[2]};
  model.bias = sol[3];
  return model;
}

/// Predicts for the given utterances; values are clamped to [1,5].
inline PredictionSet predict_baseline(const BaselineModel& model,
                                      const Corpus& corpus,
                                      const std::vector<std::string>& ids) {
  const CorpusIndex index(corpus);
  PredictionSet out;
  for (const auto& id : ids) {
    const Utterance& u = corpus.utterances[index.utterance_pos(id)];
    double value = model.global_mean;
    if (model.kind == BaselineKind::linear_features) {
      const auto f = clip_features(detail::load_utterance_audio(corpus, u));
      value = model.bias;
      for (int k = 0; k < kBaselineFeatureCount; ++k) {
        value += model.weights[k] * f[k];
      }
    }
    out.emplace(id, std::clamp(value, 1.0, 5.0));
  }
  return out;
}

/// Utterance ids of one subset, in corpus order.
inline std::vector<std::string> subset_utterances(
    const Corpus& corpus, const SplitAssignment& assignment, Subset subset) {
  std::vector<std::string> out;
  for (const auto& u : corpus.utterances) {
    const auto it = assignment.subset_of.find(u.utterance_id);
    if (it != assignment.subset_of.end() && it->second == subset) {
      out.push_back(u.utterance_id);
    }
  }
  return out;
}

}  // namespace moseval

#endif  // MOSEVAL_BASELINE_HPP_

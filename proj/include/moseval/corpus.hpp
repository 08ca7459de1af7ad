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

#ifndef MOSEVAL_CORPUS_HPP_
#define MOSEVAL_CORPUS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "moseval/csv.hpp"
#include "moseval/error.hpp"
#include "moseval/rng.hpp"

namespace moseval {

// ---------------------------------------------------------------------------
// Data model for a rated listening test.
//
// A corpus couples a set of utterances (each tied to a system, a speaker and
// a text, optionally to an audio file) with the individual listener ratings
// collected for them.  Scores are stored normalized to the canonical [1,5]
// scale; the raw scale they were collected on is kept in `scale` for
// reference.  Corpus values are treated as immutable once built, so they can
// be shared freely across threads.
// ---------------------------------------------------------------------------

struct ScaleSpec {
  double lo = 1.0;
  double hi = 5.0;
};

struct Rating {
  std::string utterance_id;
  std::string listener_id;
  double score = 0.0;
};

struct Utterance {
  std::string utterance_id;
  std::string system_id;
  std::string speaker_id;
  std::string text_id;
  std::string audio_path;  // relative to the corpus wav_dir; may be empty
};

struct Corpus {
  std::string name;
  ScaleSpec scale;  // raw scale the ratings were declared on
  std::vector<Utterance> utterances;
  std::vector<Rating> ratings;  // scores normalized to [1,5]
  std::optional<int> sample_rate;
  std::filesystem::path wav_dir;  // absolute; empty for metadata-only corpora
};

/// The unique affine map taking [scale.lo, scale.hi] onto [1,5].
inline double normalize_scale(double score, const ScaleSpec& scale) {
  if (!(scale.lo < scale.hi)) {
    throw DataError("invalid scale: lo must be < hi");
  }
  if (score < scale.lo || score > scale.hi) {
    std::ostringstream msg;
    msg << "score " << score << " outside declared scale [" << scale.lo << ","
        << scale.hi << "]";
    throw DataError(msg.str());
  }
  return 1.0 + 4.0 * (score - scale.lo) / (scale.hi - scale.lo);
}

// ---------------------------------------------------------------------------
// Lookup tables over an immutable corpus: utterance positions, rating rows
// grouped per utterance, and the sorted entity vocabularies.
// ---------------------------------------------------------------------------
class CorpusIndex {
 public:
  explicit CorpusIndex(const Corpus& corpus) : corpus_(&corpus) {
    pos_.reserve(corpus.utterances.size());
    for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
      const auto& u = corpus.utterances[i];
      if (!pos_.emplace(u.utterance_id, i).second) {
        throw DataError("duplicate utterance_id: " + u.utterance_id);
      }
    }
    rating_rows_.resize(corpus.utterances.size());
    for (std::size_t r = 0; r < corpus.ratings.size(); ++r) {
      const auto& rating = corpus.ratings[r];
      auto it = pos_.find(rating.utterance_id);
      if (it == pos_.end()) {
        throw DataError("rating references unknown utterance: " +
                        rating.utterance_id);
      }
      rating_rows_[it->second].push_back(r);
    }
    std::set<std::string> spk, sys, txt, lis;
    for (const auto& u : corpus.utterances) {
      spk.insert(u.speaker_id);
      sys.insert(u.system_id);
      txt.insert(u.text_id);
    }
    for (const auto& r : corpus.ratings) lis.insert(r.listener_id);
    speakers_.assign(spk.begin(), spk.end());
    systems_.assign(sys.begin(), sys.end());
    texts_.assign(txt.begin(), txt.end());
    listeners_.assign(lis.begin(), lis.end());
  }

  const Corpus& corpus() const { return *corpus_; }

  bool has_utterance(const std::string& id) const { return pos_.count(id) > 0; }

  std::size_t utterance_pos(const std::string& id) const {
    auto it = pos_.find(id);
    if (it == pos_.end()) throw DataError("unknown utterance: " + id);
    return it->second;
  }

  /// Rating row indices for the utterance at position `pos`.
  const std::vector<std::size_t>& rating_rows(std::size_t pos) const {
    return rating_rows_[pos];
  }

  const std::vector<std::string>& speakers() const { return speakers_; }
  const std::vector<std::string>& systems() const { return systems_; }
  const std::vector<std::string>& texts() const { return texts_; }
  const std::vector<std::string>& listeners() const { return listeners_; }

 private:
  const Corpus* corpus_;
  std::unordered_map<std::string, std::size_t> pos_;
  std::vector<std::vector<std::size_t>> rating_rows_;
  std::vector<std::string> speakers_, systems_, texts_, listeners_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
  std::string kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Collects every invariant violation in the corpus.  Violations are data,
/// not failures: this never throws on bad content.
inline ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  auto add = [&report](const std::string& kind, const std::string& message) {
    report.violations.push_back(Violation{kind, message});
  };

  if (!(corpus.scale.lo < corpus.scale.hi)) {
    add("invalid scale", "scale.lo must be < scale.hi");
  }
  if (corpus.sample_rate && *corpus.sample_rate <= 0) {
    add("invalid sample rate", "sample_rate must be positive");
  }

  std::unordered_map<std::string, std::size_t> rating_count;
  std::unordered_set<std::string> ids;
  for (const auto& u : corpus.utterances) {
    if (u.utterance_id.empty() || u.system_id.empty() ||
        u.speaker_id.empty() || u.text_id.empty()) {
      add("empty identifier", "utterance '" + u.utterance_id +
                                  "' has an empty identifier field");
    }
    if (!ids.insert(u.utterance_id).second) {
      add("duplicate utterance", "utterance_id '" + u.utterance_id +
                                     "' occurs more than once");
    }
    rating_count.emplace(u.utterance_id, 0);
  }

  std::unordered_set<std::string> pairs;
  for (const auto& r : corpus.ratings) {
    if (r.utterance_id.empty() || r.listener_id.empty()) {
      add("empty identifier", "rating with empty utterance or listener id");
    }
    auto it = rating_count.find(r.utterance_id);
    if (it == rating_count.end()) {
      add("dangling rating", "rating references unknown utterance '" +
                                 r.utterance_id + "'");
    } else {
      ++it->second;
    }
    if (!pairs.insert(r.utterance_id + '\x1f' + r.listener_id).second) {
      add("duplicate rating", "listener '" + r.listener_id +
                                  "' rates utterance '" + r.utterance_id +
                                  "' more than once");
    }
    if (!(r.score >= 1.0 && r.score <= 5.0)) {
      std::ostringstream msg;
      msg << "normalized score " << r.score << " for utterance '"
          << r.utterance_id << "' lies outside [1,5]";
      add("score out of range", msg.str());
    }
  }
  for (const auto& u : corpus.utterances) {
    auto it = rating_count.find(u.utterance_id);
    if (it != rating_count.end() && it->second == 0) {
      add("unrated utterance",
          "utterance '" + u.utterance_id + "' has no ratings");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Manifest I/O
//
// manifest.json: {"name": ..., "scale": {"lo": ..., "hi": ...},
//                 "utterances_csv": ..., "ratings_csv": ...,
//                 "wav_dir": ...(optional), "sample_rate": ...(optional)}
// utterances.csv: utterance_id,system_id,speaker_id,text_id,audio_path
// ratings.csv:    utterance_id,listener_id,score   (raw-scale scores)
// ---------------------------------------------------------------------------

namespace detail {

inline const std::vector<std::string>& utterance_header() {
  static const std::vector<std::string> h{"utterance_id", "system_id",
                                          "speaker_id", "text_id",
                                          "audio_path"};
  return h;
}

inline const std::vector<std::string>& rating_header() {
  static const std::vector<std::string> h{"utterance_id", "listener_id",
                                          "score"};
  return h;
}

}  // namespace detail

/// Loads and validates a corpus; scores come back normalized to [1,5].
/// Malformed rows are rejected with file and line, never repaired.
inline Corpus load_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open " + manifest_path.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(manifest_path.string() + ": invalid JSON: " + e.what());
  }

  Corpus corpus;
  try {
    corpus.name = manifest.at("name").get<std::string>();
    corpus.scale.lo = manifest.at("scale").at("lo").get<double>();
    corpus.scale.hi = manifest.at("scale").at("hi").get<double>();
    if (manifest.contains("sample_rate")) {
      corpus.sample_rate = manifest.at("sample_rate").get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(manifest_path.string() + ": bad manifest field: " +
                    e.what());
  }
  if (!(corpus.scale.lo < corpus.scale.hi)) {
    throw DataError(manifest_path.string() + ": scale.lo must be < scale.hi");
  }
  if (corpus.sample_rate && *corpus.sample_rate <= 0) {
    throw DataError(manifest_path.string() + ": sample_rate must be positive");
  }

  const auto base = manifest_path.has_parent_path()
                        ? manifest_path.parent_path()
                        : std::filesystem::path(".");
  auto resolve = [&base](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };
  if (!manifest.contains("utterances_csv") || !manifest.contains("ratings_csv")) {
    throw DataError(manifest_path.string() +
                    ": manifest must name utterances_csv and ratings_csv");
  }
  const auto utt_path = resolve(manifest.at("utterances_csv").get<std::string>());
  const auto rat_path = resolve(manifest.at("ratings_csv").get<std::string>());
  if (manifest.contains("wav_dir")) {
    corpus.wav_dir = std::filesystem::absolute(
        resolve(manifest.at("wav_dir").get<std::string>()));
  }

  const CsvFile utt_csv = read_csv(utt_path, detail::utterance_header());
  std::unordered_set<std::string> known;
  corpus.utterances.reserve(utt_csv.rows.size());
  for (const auto& row : utt_csv.rows) {
    Utterance u;
    u.utterance_id = row.fields[0];
    u.system_id = row.fields[1];
    u.speaker_id = row.fields[2];
    u.text_id = row.fields[3];
    u.audio_path = row.fields[4];
    for (const auto* field :
         {&u.utterance_id, &u.system_id, &u.speaker_id, &u.text_id}) {
      if (field->empty()) {
        throw DataError(utt_path.string() + ":" + std::to_string(row.line) +
                        ": empty identifier");
      }
    }
    if (!known.insert(u.utterance_id).second) {
      throw DataError(utt_path.string() + ":" + std::to_string(row.line) +
                      ": duplicate utterance_id '" + u.utterance_id + "'");
    }
    corpus.utterances.push_back(std::move(u));
  }

  const CsvFile rat_csv = read_csv(rat_path, detail::rating_header());
  std::unordered_set<std::string> pairs;
  corpus.ratings.reserve(rat_csv.rows.size());
  for (const auto& row : rat_csv.rows) {
    Rating r;
    r.utterance_id = row.fields[0];
    r.listener_id = row.fields[1];
    if (r.utterance_id.empty() || r.listener_id.empty()) {
      throw DataError(rat_path.string() + ":" + std::to_string(row.line) +
                      ": empty identifier");
    }
    if (!known.count(r.utterance_id)) {
      throw DataError(rat_path.string() + ":" + std::to_string(row.line) +
                      ": rating references unknown utterance '" +
                      r.utterance_id + "'");
    }
    if (!pairs.insert(r.utterance_id + '\x1f' + r.listener_id).second) {
      throw DataError(rat_path.string() + ":" + std::to_string(row.line) +
                      ": duplicate rating for utterance '" + r.utterance_id +
                      "' by listener '" + r.listener_id + "'");
    }
    const double raw = parse_double_field(row.fields[2], rat_path, row.line);
    try {
      r.score = normalize_scale(raw, corpus.scale);
    } catch (const DataError& e) {
      throw DataError(rat_path.string() + ":" + std::to_string(row.line) +
                      ": " + e.what());
    }
    corpus.ratings.push_back(std::move(r));
  }

  const ValidationReport report = validate_corpus(corpus);
  if (!report.ok()) {
    std::ostringstream msg;
    msg << manifest_path.string() << ": corpus invalid:";
    for (const auto& v : report.violations) msg << "\n  " << v.message;
    throw DataError(msg.str());
  }
  return corpus;
}

/// Writes manifest.json + utterances.csv + ratings.csv into `dir`.
/// Scores are written on the canonical [1,5] scale, with round-trip exact
/// number formatting, so load_manifest(save_corpus(c)) reproduces c.
inline std::filesystem::path save_corpus(const Corpus& corpus,
                                         const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string());

  std::string utts;
  utts += join_csv(detail::utterance_header()) + "\n";
  for (const auto& u : corpus.utterances) {
    utts += join_csv({u.utterance_id, u.system_id, u.speaker_id, u.text_id,
                      u.audio_path}) +
            "\n";
  }
  write_text_file(dir / "utterances.csv", utts);

  std::string rats;
  rats += join_csv(detail::rating_header()) + "\n";
  for (const auto& r : corpus.ratings) {
    rats += join_csv({r.utterance_id, r.listener_id, format_double(r.score)}) +
            "\n";
  }
  write_text_file(dir / "ratings.csv", rats);

  nlohmann::json manifest;
  manifest["name"] = corpus.name;
  manifest["scale"] = {{"lo", 1.0}, {"hi", 5.0}};
  manifest["utterances_csv"] = "utterances.csv";
  manifest["ratings_csv"] = "ratings.csv";
  if (corpus.sample_rate) manifest["sample_rate"] = *corpus.sample_rate;
  if (!corpus.wav_dir.empty()) {
    const auto rel = corpus.wav_dir.lexically_relative(
        std::filesystem::absolute(dir));
    const bool inside = !rel.empty() && rel.native().rfind("..", 0) != 0;
    manifest["wav_dir"] = inside ? rel.generic_string()
                                 : corpus.wav_dir.generic_string();
  }
  const auto manifest_path = dir / "manifest.json";
  write_text_file(manifest_path, manifest.dump(2) + "\n");
  return manifest_path;
}

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

/// Knobs for the deterministic fixture generator.  Each system gets a target
/// mean; each utterance draws a latent quality around it and each rating adds
/// listener noise, both with standard deviation `spread`.  Scores are clipped
/// to [1,5].
struct SyntheticSpec {
  int n_systems = 2;
  int n_speakers = 2;
  int n_texts = 10;
  int n_listeners = 16;
  int utterances_per_system = 5;
  int ratings_per_utterance = 8;
  std::vector<double> system_means;  // cycled; empty = evenly spaced in [1.8,4.2]
  double spread = 0.4;
  std::uint64_t seed = 0;
  std::string name = "synthetic";
  std::optional<int> sample_rate;
};

inline Corpus generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_systems < 1 || spec.n_speakers < 1 || spec.n_texts < 1 ||
      spec.n_listeners < 1 || spec.utterances_per_system < 1 ||
      spec.ratings_per_utterance < 1) {
    throw DataError("synthetic spec: all counts must be >= 1");
  }
  if (spec.ratings_per_utterance > spec.n_listeners) {
    throw DataError(
        "synthetic spec: ratings_per_utterance exceeds n_listeners (" +
        std::to_string(spec.ratings_per_utterance) + " > " +
        std::to_string(spec.n_listeners) + ")");
  }
  if (spec.spread < 0.0) throw DataError("synthetic spec: spread must be >= 0");

  auto pad_id = [](const char* prefix, int i, int width) {
    std::string digits = std::to_string(i);
    if (static_cast<int>(digits.size()) < width) {
      digits.insert(0, width - digits.size(), '0');
    }
    return std::string(prefix) + digits;
  };

  std::vector<double> means = spec.system_means;
  if (means.empty()) {
    for (int s = 0; s < spec.n_systems; ++s) {
      means.push_back(spec.n_systems == 1
                          ? 3.0
                          : 1.8 + 2.4 * s / (spec.n_systems - 1));
    }
  }

  Corpus corpus;
  corpus.name = spec.name;
  corpus.scale = ScaleSpec{1.0, 5.0};
  corpus.sample_rate = spec.sample_rate;

  Rng rng(spec.seed);
  const long long total =
      static_cast<long long>(spec.n_systems) * spec.utterances_per_system;
  int index = 0;
  for (int s = 0; s < spec.n_systems; ++s) {
    const double system_mean = means[s % means.size()];
    for (int k = 0; k < spec.utterances_per_system; ++k, ++index) {
      Utterance u;
      u.utterance_id = pad_id("utt", index, total >= 10000 ? 5 : 4);
      u.system_id = pad_id("sys", s, 3);
      u.speaker_id = pad_id("spk", static_cast<int>(rng.below(spec.n_speakers)), 3);
      u.text_id = pad_id("txt", static_cast<int>(rng.below(spec.n_texts)), 4);
      const double quality = rng.normal(system_mean, spec.spread);
      const auto panel =
          rng.sample_indices(spec.n_listeners, spec.ratings_per_utterance);
      for (std::size_t p = 0; p < panel.size(); ++p) {
        Rating r;
        r.utterance_id = u.utterance_id;
        r.listener_id = pad_id("lis", static_cast<int>(panel[p]), 3);
        r.score = std::clamp(rng.normal(quality, spec.spread), 1.0, 5.0);
        corpus.ratings.push_back(std::move(r));
      }
      corpus.utterances.push_back(std::move(u));
    }
  }
  return corpus;
}

}  // namespace moseval

#endif  // MOSEVAL_CORPUS_HPP_

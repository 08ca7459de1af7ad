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

#ifndef MOSEVAL_SPLITTER_HPP_
#define MOSEVAL_SPLITTER_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "moseval/csv.hpp"
#include "moseval/stats.hpp"

namespace moseval {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct UnseenCounts {
  int speakers = 0;
  int systems = 0;
  int texts = 0;
  int listeners = 0;
};

struct SplitConfig {
  std::array<double, 3> proportions = {0.7, 0.15, 0.15};  // train, dev, test
  UnseenCounts dev_unseen;
  UnseenCounts test_unseen;
  SplitObjectiveConfig objective;
  int n_candidates = 1000;
  std::uint64_t master_seed = 0;

  void validate() const {
    const double sum = proportions[0] + proportions[1] + proportions[2];
    if (std::abs(sum - 1.0) > 1e-9) {
      throw DataError("split proportions must sum to 1, got " +
                      format_double(sum));
    }
    for (double p : proportions) {
      if (p < 0.0) throw DataError("split proportions must be non-negative");
    }
    if (n_candidates < 1) throw DataError("n_candidates must be >= 1");
    for (const auto* c : {&dev_unseen, &test_unseen}) {
      if (c->speakers < 0 || c->systems < 0 || c->texts < 0 ||
          c->listeners < 0) {
        throw DataError("unseen counts must be non-negative");
      }
    }
  }
};

/// Target subset sizes: dev and test get round(p*N), train the remainder.
inline std::array<std::size_t, 3> subset_targets(const SplitConfig& cfg,
                                                 std::size_t n_utterances) {
  const auto round_target = [n_utterances](double p) {
    return static_cast<std::size_t>(
        std::llround(p * static_cast<double>(n_utterances)));
  };
  const std::size_t dev = round_target(cfg.proportions[1]);
  const std::size_t test = round_target(cfg.proportions[2]);
  if (dev + test > n_utterances) {
    throw DataError("split proportions leave no room for a training set");
  }
  const std::size_t train = n_utterances - dev - test;
  if (train == 0 || dev == 0 || test == 0) {
    throw DataError(
        "degenerate split: every subset must receive at least one utterance "
        "(targets train=" +
        std::to_string(train) + " dev=" + std::to_string(dev) +
        " test=" + std::to_string(test) + ")");
  }
  return {train, dev, test};
}

// ---------------------------------------------------------------------------
// Candidate generation
// ---------------------------------------------------------------------------

/// A proposed split, or the reason it had to be discarded.  Infeasible
/// requests (more unseen entities than exist, degenerate proportions) throw
/// instead: no amount of re-seeding can fix those.
struct Candidate {
  std::optional<SplitAssignment> assignment;
  std::string invalid_reason;

  bool valid() const { return assignment.has_value(); }
};

namespace detail {

struct EntityPools {
  const std::vector<std::string>* pool;
  int test_count;
  int dev_count;
  std::vector<std::string>* test_out;
  std::vector<std::string>* dev_out;
  const char* label;
};

}  // namespace detail

/// Draws one candidate split.  Deterministic in (corpus, cfg, seed):
///  1. designate unseen entities per category, test first then dev, without
///     replacement and disjoint across subsets;
///  2. force every utterance of a designated unseen speaker/system/text into
///     that subset; an utterance claimed by both dev and test invalidates the
///     candidate, as does overflowing a subset's target size;
///  3. fill test and then dev up to round(proportion*N) by uniform sampling
///     from the unconstrained utterances; train takes the remainder;
///  4. drop every rating a designated unseen listener cast outside their own
///     subset; a candidate that leaves some utterance without ratings is
///     invalid.
inline Candidate propose_candidate(const CorpusIndex& index,
                                   const SplitConfig& cfg,
                                   std::uint64_t seed) {
  cfg.validate();
  const Corpus& corpus = index.corpus();
  const std::size_t n = corpus.utterances.size();
  if (n == 0) throw DataError("cannot split an empty corpus");
  const auto targets = subset_targets(cfg, n);

  Rng rng(seed);
  SplitAssignment assignment;

  auto invalid = [](std::string reason) {
    Candidate c;
    c.invalid_reason = std::move(reason);
    return c;
  };

  // Designate unseen entities.  Category order and the sorted pools are part
  // of the deterministic contract.
  UnseenEntities& test_unseen = assignment.unseen(Subset::test);
  UnseenEntities& dev_unseen = assignment.unseen(Subset::dev);
  const detail::EntityPools pools[] = {
      {&index.speakers(), cfg.test_unseen.speakers, cfg.dev_unseen.speakers,
       &test_unseen.speakers, &dev_unseen.speakers, "speakers"},
      {&index.systems(), cfg.test_unseen.systems, cfg.dev_unseen.systems,
       &test_unseen.systems, &dev_unseen.systems, "systems"},
      {&index.texts(), cfg.test_unseen.texts, cfg.dev_unseen.texts,
       &test_unseen.texts, &dev_unseen.texts, "texts"},
      {&index.listeners(), cfg.test_unseen.listeners, cfg.dev_unseen.listeners,
       &test_unseen.listeners, &dev_unseen.listeners, "listeners"},
  };
  for (const auto& p : pools) {
    const std::size_t need =
        static_cast<std::size_t>(p.test_count) + static_cast<std::size_t>(p.dev_count);
    if (need > p.pool->size()) {
      throw DataError(std::string("not enough ") + p.label +
                      " for the requested unseen counts (" +
                      std::to_string(need) + " needed, " +
                      std::to_string(p.pool->size()) + " available)");
    }
    std::vector<std::string> remaining = *p.pool;
    rng.partial_shuffle(remaining, need);
    p.test_out->assign(remaining.begin(), remaining.begin() + p.test_count);
    p.dev_out->assign(remaining.begin() + p.test_count,
                      remaining.begin() + need);
    std::sort(p.test_out->begin(), p.test_out->end());
    std::sort(p.dev_out->begin(), p.dev_out->end());
  }

  auto as_set = [](const std::vector<std::string>& v) {
    return std::unordered_set<std::string>(v.begin(), v.end());
  };
  const auto test_spk = as_set(test_unseen.speakers);
  const auto test_sys = as_set(test_unseen.systems);
  const auto test_txt = as_set(test_unseen.texts);
  const auto dev_spk = as_set(dev_unseen.speakers);
  const auto dev_sys = as_set(dev_unseen.systems);
  const auto dev_txt = as_set(dev_unseen.texts);

  // Forced assignments from unseen speakers/systems/texts.
  std::vector<int> forced(n, -1);  // -1 free, else Subset value
  std::array<std::size_t, 3> counts = {0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& u = corpus.utterances[i];
    const bool to_test = test_spk.count(u.speaker_id) ||
                         test_sys.count(u.system_id) ||
                         test_txt.count(u.text_id);
    const bool to_dev = dev_spk.count(u.speaker_id) ||
                        dev_sys.count(u.system_id) || dev_txt.count(u.text_id);
    if (to_test && to_dev) {
      return invalid("utterance '" + u.utterance_id +
                     "' is claimed by both dev-unseen and test-unseen "
                     "entities");
    }
    if (to_test) {
      forced[i] = static_cast<int>(Subset::test);
      ++counts[static_cast<std::size_t>(Subset::test)];
    } else if (to_dev) {
      forced[i] = static_cast<int>(Subset::dev);
      ++counts[static_cast<std::size_t>(Subset::dev)];
    }
  }
  for (Subset s : {Subset::test, Subset::dev}) {
    const auto si = static_cast<std::size_t>(s);
    if (counts[si] > targets[si]) {
      return invalid(std::string("forced assignments exceed the ") +
                     subset_name(s) + " target (" +
                     std::to_string(counts[si]) + " > " +
                     std::to_string(targets[si]) + ")");
    }
  }

  // Fill test, then dev, from the unconstrained utterances.
  std::vector<std::size_t> free_positions;
  free_positions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (forced[i] < 0) free_positions.push_back(i);
  }
  const std::size_t need_test =
      targets[static_cast<std::size_t>(Subset::test)] -
      counts[static_cast<std::size_t>(Subset::test)];
  const std::size_t need_dev = targets[static_cast<std::size_t>(Subset::dev)] -
                               counts[static_cast<std::size_t>(Subset::dev)];
  rng.partial_shuffle(free_positions, need_test + need_dev);
  for (std::size_t k = 0; k < free_positions.size(); ++k) {
    const Subset s = k < need_test               ? Subset::test
                     : k < need_test + need_dev ? Subset::dev
                                                : Subset::train;
    forced[free_positions[k]] = static_cast<int>(s);
  }
  assignment.subset_of.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    assignment.subset_of.emplace(corpus.utterances[i].utterance_id,
                                 static_cast<Subset>(forced[i]));
  }

  // Ratings from designated unseen listeners are dropped outside their
  // subset.  Iterating in corpus rating order keeps the list deterministic.
  const auto test_lis = as_set(test_unseen.listeners);
  const auto dev_lis = as_set(dev_unseen.listeners);
  if (!test_lis.empty() || !dev_lis.empty()) {
    std::vector<int> retained(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      retained[i] = static_cast<int>(index.rating_rows(i).size());
    }
    for (const auto& r : corpus.ratings) {
      Subset home;
      if (test_lis.count(r.listener_id)) {
        home = Subset::test;
      } else if (dev_lis.count(r.listener_id)) {
        home = Subset::dev;
      } else {
        continue;
      }
      const std::size_t pos = index.utterance_pos(r.utterance_id);
      if (static_cast<Subset>(forced[pos]) != home) {
        assignment.dropped_ratings.push_back(
            DroppedRating{r.utterance_id, r.listener_id});
        --retained[pos];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (retained[i] == 0) {
        return invalid("utterance '" + corpus.utterances[i].utterance_id +
                       "' would keep no ratings after dropping unseen "
                       "listeners");
      }
    }
  }

  Candidate c;
  c.assignment = std::move(assignment);
  return c;
}

inline Candidate propose_candidate(const Corpus& corpus, const SplitConfig& cfg,
                                   std::uint64_t seed) {
  return propose_candidate(CorpusIndex(corpus), cfg, seed);
}

// ---------------------------------------------------------------------------
// Constraint verification
// ---------------------------------------------------------------------------

struct ConstraintReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Independent check of an assignment against the unseen-entity rules and
/// size targets.  Empty report iff everything holds.
inline ConstraintReport check_constraints(const CorpusIndex& index,
                                          const SplitAssignment& assignment,
                                          const SplitConfig& cfg) {
  const Corpus& corpus = index.corpus();
  ConstraintReport report;
  auto add = [&report](const std::string& kind, const std::string& message) {
    report.violations.push_back(Violation{kind, message});
  };

  // Coverage and subset sizes.
  std::array<std::size_t, 3> sizes = {0, 0, 0};
  std::size_t covered = 0;
  for (const auto& u : corpus.utterances) {
    const auto it = assignment.subset_of.find(u.utterance_id);
    if (it == assignment.subset_of.end()) {
      add("coverage", "utterance '" + u.utterance_id + "' is unassigned");
      continue;
    }
    ++covered;
    ++sizes[static_cast<std::size_t>(it->second)];
  }
  if (assignment.subset_of.size() != covered) {
    add("coverage", "assignment names " +
                        std::to_string(assignment.subset_of.size() - covered) +
                        " utterance(s) not present in the corpus");
  }
  std::array<std::size_t, 3> targets;
  try {
    targets = subset_targets(cfg, corpus.utterances.size());
    for (Subset s : kSubsets) {
      const auto si = static_cast<std::size_t>(s);
      const auto lo = targets[si] > 0 ? targets[si] - 1 : 0;
      if (sizes[si] < lo || sizes[si] > targets[si] + 1) {
        add("subset size", std::string(subset_name(s)) + " has " +
                               std::to_string(sizes[si]) +
                               " utterances, target " +
                               std::to_string(targets[si]) + " (+/-1)");
      }
    }
  } catch (const DataError& e) {
    add("subset size", e.what());
  }

  // Designation counts and disjointness across dev/test.
  const UnseenEntities& dev_u = assignment.unseen(Subset::dev);
  const UnseenEntities& test_u = assignment.unseen(Subset::test);
  struct CatView {
    const char* label;
    const std::vector<std::string>* dev;
    const std::vector<std::string>* test;
    int dev_want;
    int test_want;
  };
  const CatView cats[] = {
      {"speaker", &dev_u.speakers, &test_u.speakers, cfg.dev_unseen.speakers,
       cfg.test_unseen.speakers},
      {"system", &dev_u.systems, &test_u.systems, cfg.dev_unseen.systems,
       cfg.test_unseen.systems},
      {"text", &dev_u.texts, &test_u.texts, cfg.dev_unseen.texts,
       cfg.test_unseen.texts},
      {"listener", &dev_u.listeners, &test_u.listeners,
       cfg.dev_unseen.listeners, cfg.test_unseen.listeners},
  };
  for (const auto& cat : cats) {
    if (static_cast<int>(cat.dev->size()) != cat.dev_want ||
        static_cast<int>(cat.test->size()) != cat.test_want) {
      add("designation count",
          std::string("category ") + cat.label + ": designated " +
              std::to_string(cat.dev->size()) + " dev / " +
              std::to_string(cat.test->size()) + " test, configured " +
              std::to_string(cat.dev_want) + " / " +
              std::to_string(cat.test_want));
    }
    std::unordered_set<std::string> dev_set(cat.dev->begin(), cat.dev->end());
    for (const auto& id : *cat.test) {
      if (dev_set.count(id)) {
        add("designation overlap", std::string("category ") + cat.label +
                                       ": '" + id +
                                       "' designated for both dev and test");
      }
    }
  }

  // Unseen speakers/systems/texts must not leak into earlier subsets.
  auto subset_of = [&assignment](const std::string& id) -> std::optional<Subset> {
    const auto it = assignment.subset_of.find(id);
    if (it == assignment.subset_of.end()) return std::nullopt;
    return it->second;
  };
  struct FieldView {
    const char* label;
    std::string Utterance::* field;
    const std::vector<std::string>* dev;
    const std::vector<std::string>* test;
  };
  const FieldView fields[] = {
      {"speaker", &Utterance::speaker_id, &dev_u.speakers, &test_u.speakers},
      {"system", &Utterance::system_id, &dev_u.systems, &test_u.systems},
      {"text", &Utterance::text_id, &dev_u.texts, &test_u.texts},
  };
  for (const auto& f : fields) {
    const auto dev_set = std::unordered_set<std::string>(f.dev->begin(),
                                                         f.dev->end());
    const auto test_set = std::unordered_set<std::string>(f.test->begin(),
                                                          f.test->end());
    for (const auto& u : corpus.utterances) {
      const auto s = subset_of(u.utterance_id);
      if (!s) continue;
      const std::string& entity = u.*(f.field);
      if (test_set.count(entity) && *s != Subset::test) {
        add("unseen leak", std::string("test-unseen ") + f.label + " '" +
                               entity + "' has utterance '" + u.utterance_id +
                               "' in " + subset_name(*s));
      }
      if (dev_set.count(entity) && *s == Subset::train) {
        add("unseen leak", std::string("dev-unseen ") + f.label + " '" +
                               entity + "' has utterance '" + u.utterance_id +
                               "' in train");
      }
    }
  }

  // Designated unseen listeners may contribute retained ratings only inside
  // their own subset.
  const DroppedSet dropped(assignment.dropped_ratings);
  for (Subset s : {Subset::dev, Subset::test}) {
    const auto& listeners = assignment.unseen(s).listeners;
    if (listeners.empty()) continue;
    const std::unordered_set<std::string> set(listeners.begin(),
                                              listeners.end());
    for (const auto& r : corpus.ratings) {
      if (!set.count(r.listener_id)) continue;
      const auto home = subset_of(r.utterance_id);
      if (!home) continue;
      if (*home != s && !dropped.contains(r.utterance_id, r.listener_id)) {
        add("unseen leak", std::string("unseen listener '") + r.listener_id +
                               "' (designated for " + subset_name(s) +
                               ") retains a rating on '" + r.utterance_id +
                               "' in " + subset_name(*home));
      }
    }
  }

  return report;
}

inline ConstraintReport check_constraints(const Corpus& corpus,
                                          const SplitAssignment& assignment,
                                          const SplitConfig& cfg) {
  return check_constraints(CorpusIndex(corpus), assignment, cfg);
}

// ---------------------------------------------------------------------------
// Random search
// ---------------------------------------------------------------------------

struct CandidateRecord {
  std::uint64_t seed = 0;
  bool valid = false;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::string invalid_reason;
};

struct SearchLog {
  std::vector<CandidateRecord> candidates;
  std::size_t winner_index = 0;
};

struct SearchResult {
  SplitAssignment assignment;
  double objective = 0.0;
  SearchLog log;
};

/// Evaluates cfg.n_candidates candidates with seeds master_seed + i and
/// returns the valid one with the lowest objective (ties: lowest index).
/// Candidates are independent, so they are scored on a thread pool; results
/// are keyed by index and reduced in index order, making the outcome
/// identical for any thread count.
inline SearchResult search_best_split(const Corpus& corpus,
                                      const SplitConfig& cfg,
                                      unsigned n_threads = 0) {
  cfg.validate();
  const CorpusIndex index(corpus);
  subset_targets(cfg, corpus.utterances.size());  // reject degenerate requests

  const std::size_t n = static_cast<std::size_t>(cfg.n_candidates);
  std::vector<CandidateRecord> records(n);

  if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, n));

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    try {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= n) return;
        CandidateRecord& rec = records[i];
        rec.seed = cfg.master_seed + i;
        Candidate candidate = propose_candidate(index, cfg, rec.seed);
        if (!candidate.valid()) {
          rec.invalid_reason = std::move(candidate.invalid_reason);
          continue;
        }
        rec.objective =
            split_objective(index, *candidate.assignment, cfg.objective);
        rec.valid = true;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      cursor.store(n);
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!records[i].valid) continue;
    if (best == n || records[i].objective < records[best].objective) best = i;
  }
  if (best == n) {
    std::map<std::string, int> reasons;
    for (const auto& rec : records) ++reasons[rec.invalid_reason];
    std::ostringstream msg;
    msg << "no valid split candidate among " << n << ":";
    for (const auto& [reason, count] : reasons) {
      msg << "\n  " << count << "x " << reason;
    }
    throw DataError(msg.str());
  }

  SearchResult result;
  result.objective = records[best].objective;
  result.log.winner_index = best;
  result.log.candidates = std::move(records);
  // Regenerate the winner; proposal is deterministic in its seed.
  Candidate winner = propose_candidate(index, cfg, cfg.master_seed + best);
  result.assignment = std::move(*winner.assignment);
  return result;
}

// ---------------------------------------------------------------------------
// Split file I/O
//
// split.csv: utterance_id,subset  (subset in train|dev|test), corpus order.
// split.meta.json carries designated_unseen, dropped_ratings and any extra
// context (objective, winning seed, config echo) the caller passes.
// ---------------------------------------------------------------------------

inline std::filesystem::path split_meta_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".meta.json");
  return p;
}

inline nlohmann::json unseen_to_json(const UnseenEntities& u) {
  return {{"speakers", u.speakers},
          {"systems", u.systems},
          {"texts", u.texts},
          {"listeners", u.listeners}};
}

inline void export_split(const SplitAssignment& assignment,
                         const Corpus& corpus,
                         const std::filesystem::path& csv_path,
                         const nlohmann::json& extra_meta = nlohmann::json()) {
  std::string csv = "utterance_id,subset\n";
  for (const auto& u : corpus.utterances) {
    const auto it = assignment.subset_of.find(u.utterance_id);
    if (it == assignment.subset_of.end()) {
      throw DataError("export: utterance '" + u.utterance_id +
                      "' is unassigned");
    }
    csv += u.utterance_id;
    csv += ',';
    csv += subset_name(it->second);
    csv += '\n';
  }
  write_text_file(csv_path, csv);

  nlohmann::json meta;
  if (extra_meta.is_object()) meta = extra_meta;
  meta["designated_unseen"] = {
      {"dev", unseen_to_json(assignment.unseen(Subset::dev))},
      {"test", unseen_to_json(assignment.unseen(Subset::test))}};
  nlohmann::json dropped = nlohmann::json::array();
  for (const auto& d : assignment.dropped_ratings) {
    dropped.push_back({d.utterance_id, d.listener_id});
  }
  meta["dropped_ratings"] = std::move(dropped);
  write_text_file(split_meta_path(csv_path), meta.dump(2) + "\n");
}

namespace detail {

inline UnseenEntities unseen_from_json(const nlohmann::json& j) {
  UnseenEntities u;
  u.speakers = j.value("speakers", std::vector<std::string>{});
  u.systems = j.value("systems", std::vector<std::string>{});
  u.texts = j.value("texts", std::vector<std::string>{});
  u.listeners = j.value("listeners", std::vector<std::string>{});
  return u;
}

}  // namespace detail

/// Reads split.csv (+ companion meta when present) back into an assignment.
/// The file must cover the corpus exactly; unknown utterances and bad subset
/// labels are rejected with their line number.
inline SplitAssignment import_split(const std::filesystem::path& csv_path,
                                    const Corpus& corpus) {
  const CorpusIndex index(corpus);
  const CsvFile csv = read_csv(csv_path, {"utterance_id", "subset"});
  SplitAssignment assignment;
  for (const auto& row : csv.rows) {
    const std::string& id = row.fields[0];
    if (!index.has_utterance(id)) {
      throw DataError(csv_path.string() + ":" + std::to_string(row.line) +
                      ": unknown utterance '" + id + "'");
    }
    Subset s;
    try {
      s = subset_from_name(row.fields[1]);
    } catch (const DataError& e) {
      throw DataError(csv_path.string() + ":" + std::to_string(row.line) +
                      ": " + e.what());
    }
    if (!assignment.subset_of.emplace(id, s).second) {
      throw DataError(csv_path.string() + ":" + std::to_string(row.line) +
                      ": utterance '" + id + "' assigned twice");
    }
  }
  if (assignment.subset_of.size() != corpus.utterances.size()) {
    for (const auto& u : corpus.utterances) {
      if (!assignment.subset_of.count(u.utterance_id)) {
        throw DataError(csv_path.string() + ": utterance '" + u.utterance_id +
                        "' missing from split");
      }
    }
  }

  const auto meta_path = split_meta_path(csv_path);
  if (std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path);
    if (!in) throw IoError("cannot open " + meta_path.string());
    nlohmann::json meta;
    try {
      in >> meta;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(meta_path.string() + ": invalid JSON: " + e.what());
    }
    if (meta.contains("designated_unseen")) {
      const auto& du = meta.at("designated_unseen");
      if (du.contains("dev")) {
        assignment.unseen(Subset::dev) = detail::unseen_from_json(du.at("dev"));
      }
      if (du.contains("test")) {
        assignment.unseen(Subset::test) =
            detail::unseen_from_json(du.at("test"));
      }
    }
    if (meta.contains("dropped_ratings")) {
      for (const auto& d : meta.at("dropped_ratings")) {
        if (!d.is_array() || d.size() != 2) {
          throw DataError(meta_path.string() +
                          ": dropped_ratings entries must be "
                          "[utterance_id, listener_id] pairs");
        }
        DroppedRating dr{d.at(0).get<std::string>(),
                         d.at(1).get<std::string>()};
        if (!index.has_utterance(dr.utterance_id)) {
          throw DataError(meta_path.string() +
                          ": dropped rating references unknown utterance '" +
                          dr.utterance_id + "'");
        }
        assignment.dropped_ratings.push_back(std::move(dr));
      }
    }
  }
  return assignment;
}

}  // namespace moseval

#endif  // MOSEVAL_SPLITTER_HPP_

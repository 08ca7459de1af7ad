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
//
// moseval: listening-test corpus tooling in one binary.
//
// Subcommands: synth, validate, stats, split, augment, baseline, evaluate,
// analyze-unseen, plot.  Exit codes: 0 success, 1 usage error, 2 data error,
// 3 I/O error.  Every randomized command takes --seed and reproduces its
// output files byte for byte.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "moseval/analysis.hpp"
#include "moseval/audio.hpp"
#include "moseval/baseline.hpp"
#include "moseval/corpus.hpp"
#include "moseval/metrics.hpp"
#include "moseval/splitter.hpp"
#include "moseval/stats.hpp"

namespace moseval {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Flag parsing helpers
// ---------------------------------------------------------------------------

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::array<double, 3> parse_proportions(const std::string& s) {
  const auto parts = split_on(s, ',');
  if (parts.size() != 3) {
    throw UsageError("--proportions expects train,dev,test (three values)");
  }
  std::array<double, 3> p{};
  for (int i = 0; i < 3; ++i) {
    try {
      std::size_t used = 0;
      p[i] = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      throw UsageError("--proportions: bad number '" + parts[i] + "'");
    }
  }
  return p;
}

// "dev:spk=1,sys=6,lis=8,txt=5" -> counts for one subset.
void parse_unseen_flag(const std::string& s, SplitConfig& cfg) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    throw UsageError("--unseen expects SUBSET:spk=..,sys=..,lis=..,txt=..");
  }
  const std::string subset = s.substr(0, colon);
  UnseenCounts* counts = nullptr;
  if (subset == "dev") {
    counts = &cfg.dev_unseen;
  } else if (subset == "test") {
    counts = &cfg.test_unseen;
  } else {
    throw UsageError("--unseen subset must be dev or test, got '" + subset +
                     "'");
  }
  for (const auto& item : split_on(s.substr(colon + 1), ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--unseen: expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--unseen: bad count in '" + item + "'");
    }
    if (key == "spk") {
      counts->speakers = value;
    } else if (key == "sys") {
      counts->systems = value;
    } else if (key == "lis") {
      counts->listeners = value;
    } else if (key == "txt") {
      counts->texts = value;
    } else {
      throw UsageError("--unseen: unknown category '" + key +
                       "' (use spk|sys|lis|txt)");
    }
  }
}

std::set<AugmentKind> parse_kinds(const std::string& s) {
  if (s == "all") {
    return {AugmentKind::speed_up, AugmentKind::speed_down,
            AugmentKind::trim_silence, AugmentKind::pad_silence};
  }
  std::set<AugmentKind> kinds;
  for (const auto& token : split_on(s, ',')) {
    if (token == "speedup") {
      kinds.insert(AugmentKind::speed_up);
    } else if (token == "slowdown") {
      kinds.insert(AugmentKind::speed_down);
    } else if (token == "trim") {
      kinds.insert(AugmentKind::trim_silence);
    } else if (token == "pad") {
      kinds.insert(AugmentKind::pad_silence);
    } else {
      throw UsageError("--kinds: unknown kind '" + token +
                       "' (use all or speedup|slowdown|trim|pad)");
    }
  }
  if (kinds.empty()) throw UsageError("--kinds: no kinds selected");
  return kinds;
}

std::pair<double, double> parse_range(const std::string& s, const char* flag) {
  const auto parts = split_on(s, ',');
  if (parts.size() != 2) {
    throw UsageError(std::string(flag) + " expects lo,hi");
  }
  try {
    return {std::stod(parts[0]), std::stod(parts[1])};
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + ": bad number in '" + s + "'");
  }
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

json histogram_to_json(const Histogram& h) {
  return {{"bin_edges", h.bin_edges}, {"counts", h.counts}};
}

json report_to_json(const EvaluationReport& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  return {{"level", level_name(r.level)}, {"n", r.n},     {"mse", r.mse},
          {"lcc", opt(r.lcc)},            {"srcc", opt(r.srcc)},
          {"ktau", opt(r.ktau)}};
}

json summary_to_json(const SampleSummary& s) {
  return {{"mean", s.mean}, {"std", s.stddev}, {"count", s.count}};
}

json analysis_to_json(const UnseenAnalysis& a) {
  json categories = json::array();
  for (const auto& c : a.categories) {
    categories.push_back(
        {{"category", category_name(c.category)},
         {"seen", summary_to_json(c.seen)},
         {"unseen", summary_to_json(c.unseen)},
         {"t_test",
          {{"t", c.t_test.t_statistic},
           {"df", c.t_test.degrees_of_freedom},
           {"p", c.t_test.p_value},
           {"significant", c.t_test.significant},
           {"degenerate", c.t_test.degenerate}}},
         {"unseen_harder", c.unseen_harder}});
  }
  return {{"subset", subset_name(a.subset)},
          {"alpha", a.alpha},
          {"categories", std::move(categories)}};
}

void write_json(const json& j, const std::filesystem::path& path) {
  write_text_file(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string out_dir;
  SyntheticSpec spec;
  std::string system_means;
  bool wav = false;
  int sample_rate = 16000;
};

void run_synth(const SynthArgs& args) {
  SyntheticSpec spec = args.spec;
  if (!args.system_means.empty()) {
    for (const auto& tok : split_on(args.system_means, ',')) {
      try {
        spec.system_means.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw UsageError("--system-means: bad number '" + tok + "'");
      }
    }
  }
  if (args.wav) spec.sample_rate = args.sample_rate;
  Corpus corpus = generate_synthetic(spec);

  const std::filesystem::path out_dir(args.out_dir);
  if (args.wav) {
    const auto wav_dir = out_dir / "wav";
    std::error_code ec;
    std::filesystem::create_directories(wav_dir, ec);
    if (ec) throw IoError("cannot create " + wav_dir.string());
    for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
      auto& u = corpus.utterances[i];
      // Deterministic tone per utterance; durations vary so duration-based
      // features are informative.
      const double freq = 200.0 + 15.0 * static_cast<double>(i % 60);
      const double seconds = 1.0 + 0.1 * static_cast<double>(i % 5);
      AudioClip clip;
      clip.sample_rate = args.sample_rate;
      const auto n = static_cast<std::size_t>(
          std::llround(seconds * args.sample_rate));
      clip.samples.resize(n);
      for (std::size_t t = 0; t < n; ++t) {
        clip.samples[t] = 0.5 * std::sin(2.0 * detail::kAudioPi * freq *
                                         static_cast<double>(t) /
                                         args.sample_rate);
      }
      u.audio_path = u.utterance_id + ".wav";
      write_wav(clip, wav_dir / u.audio_path);
    }
    corpus.wav_dir = std::filesystem::absolute(wav_dir);
  }
  const auto manifest = save_corpus(corpus, out_dir);
  std::cout << "wrote " << manifest.string() << " ("
            << corpus.utterances.size() << " utterances, "
            << corpus.ratings.size() << " ratings)\n";
}

void run_validate(const std::string& manifest, const std::string& out) {
  const Corpus corpus = load_manifest(manifest);
  const ValidationReport report = validate_corpus(corpus);
  if (!out.empty()) {
    json violations = json::array();
    for (const auto& v : report.violations) {
      violations.push_back({{"kind", v.kind}, {"message", v.message}});
    }
    write_json({{"valid", report.ok()}, {"violations", violations}}, out);
  }
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "corpus has " << report.violations.size() << " violation(s)";
    for (const auto& v : report.violations) msg << "\n  " << v.message;
    throw DataError(msg.str());
  }
  std::cout << "ok: " << corpus.utterances.size() << " utterances, "
            << corpus.ratings.size() << " ratings\n";
}

void run_stats(const std::string& manifest, const std::string& out) {
  const Corpus corpus = load_manifest(manifest);
  const auto stats = utterance_stats(corpus);

  std::map<std::string, std::pair<double, int>> by_system;
  std::unordered_map<std::string, const Utterance*> utt_by_id;
  for (const auto& u : corpus.utterances) utt_by_id.emplace(u.utterance_id, &u);
  for (const auto& s : stats) {
    auto& acc = by_system[utt_by_id.at(s.utterance_id)->system_id];
    acc.first += s.mean_score;
    acc.second += 1;
  }

  json systems = json::array();
  for (const auto& [sys, acc] : by_system) {
    systems.push_back({{"system_id", sys},
                       {"mean_mos", acc.first / acc.second},
                       {"n_utterances", acc.second}});
  }
  json utterances = json::array();
  for (const auto& s : stats) {
    utterances.push_back({{"utterance_id", s.utterance_id},
                          {"mean", s.mean_score},
                          {"stddev", s.stddev},
                          {"count", s.rating_count}});
  }
  std::vector<double> scores;
  scores.reserve(corpus.ratings.size());
  for (const auto& r : corpus.ratings) scores.push_back(r.score);
  std::vector<double> stddevs;
  stddevs.reserve(stats.size());
  for (const auto& s : stats) stddevs.push_back(s.stddev);

  json j = {{"name", corpus.name},
            {"n_utterances", corpus.utterances.size()},
            {"n_ratings", corpus.ratings.size()},
            {"systems", std::move(systems)},
            {"utterances", std::move(utterances)},
            {"score_histogram",
             histogram_to_json(score_histogram(scores,
                                               integer_centered_edges()))},
            {"stddev_histogram",
             histogram_to_json(score_histogram(
                 stddevs, {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0,
                           2.25, 2.5, 2.75, 3.0}))}};
  write_json(j, out);
  std::cout << "wrote " << out << "\n";
}

struct SplitArgs {
  std::string manifest;
  std::string proportions = "0.7,0.15,0.15";
  std::vector<std::string> unseen;
  int candidates = 1000;
  std::uint64_t seed = 0;
  bool no_stddev_term = false;
  unsigned threads = 0;
  std::string out;
};

void run_split(const SplitArgs& args) {
  const Corpus corpus = load_manifest(args.manifest);
  SplitConfig cfg;
  cfg.proportions = parse_proportions(args.proportions);
  for (const auto& u : args.unseen) parse_unseen_flag(u, cfg);
  cfg.n_candidates = args.candidates;
  cfg.master_seed = args.seed;
  cfg.objective.include_stddev_term = !args.no_stddev_term;

  const SearchResult result = search_best_split(corpus, cfg, args.threads);

  std::size_t n_valid = 0;
  for (const auto& rec : result.log.candidates) n_valid += rec.valid ? 1 : 0;

  json cfg_echo = {
      {"proportions", {cfg.proportions[0], cfg.proportions[1],
                       cfg.proportions[2]}},
      {"unseen",
       {{"dev",
         {{"spk", cfg.dev_unseen.speakers},
          {"sys", cfg.dev_unseen.systems},
          {"lis", cfg.dev_unseen.listeners},
          {"txt", cfg.dev_unseen.texts}}},
        {"test",
         {{"spk", cfg.test_unseen.speakers},
          {"sys", cfg.test_unseen.systems},
          {"lis", cfg.test_unseen.listeners},
          {"txt", cfg.test_unseen.texts}}}}},
      {"candidates", cfg.n_candidates},
      {"master_seed", cfg.master_seed},
      {"include_stddev_term", cfg.objective.include_stddev_term}};
  json extra = {{"objective", result.objective},
                {"winning_seed",
                 result.log.candidates[result.log.winner_index].seed},
                {"valid_candidates", n_valid},
                {"config", std::move(cfg_echo)}};
  export_split(result.assignment, corpus, args.out, extra);

  std::cout << "best objective " << format_double(result.objective)
            << " (candidate " << result.log.winner_index << ", seed "
            << result.log.candidates[result.log.winner_index].seed << ", "
            << n_valid << "/" << args.candidates << " valid)\n"
            << "wrote " << args.out << " and "
            << split_meta_path(args.out).string() << "\n";
}

struct AugmentArgs {
  std::string manifest;
  std::string out_dir;
  std::string kinds = "all";
  std::uint64_t seed = 0;
  std::string speed_range;
  std::string silence_range;
};

void run_augment(const AugmentArgs& args) {
  const Corpus corpus = load_manifest(args.manifest);
  AugmentationSpec spec;
  spec.kinds = parse_kinds(args.kinds);
  spec.seed = args.seed;
  if (!args.speed_range.empty()) {
    std::tie(spec.speed_lo, spec.speed_hi) =
        parse_range(args.speed_range, "--speed-range");
  }
  if (!args.silence_range.empty()) {
    std::tie(spec.silence_lo, spec.silence_hi) =
        parse_range(args.silence_range, "--silence-range");
  }
  const AugmentResult result = augment_corpus(corpus, spec, args.out_dir);
  const auto manifest = save_corpus(result.corpus, args.out_dir);
  std::cout << "wrote " << manifest.string() << " ("
            << result.corpus.utterances.size() << " utterances from "
            << corpus.utterances.size() << ")\n";
  if (!result.errors.empty()) {
    std::ostringstream msg;
    msg << result.errors.size() << " file(s) failed:";
    for (const auto& e : result.errors) msg << "\n  " << e;
    throw IoError(msg.str());
  }
}

struct BaselineArgs {
  std::string manifest;
  std::string split;
  std::string kind = "global_mean";
  std::string subset = "test";
  std::string out;
};

void run_baseline(const BaselineArgs& args) {
  const Corpus corpus = load_manifest(args.manifest);
  const SplitAssignment assignment = import_split(args.split, corpus);
  const BaselineModel model =
      fit_baseline(corpus, assignment, baseline_kind_from_name(args.kind));
  const auto ids =
      subset_utterances(corpus, assignment, subset_from_name(args.subset));
  if (ids.empty()) {
    throw DataError("subset '" + args.subset + "' is empty");
  }
  save_predictions(predict_baseline(model, corpus, ids), args.out);
  std::cout << "wrote " << args.out << " (" << ids.size() << " predictions)\n";
}

struct EvaluateArgs {
  std::string manifest;
  std::string split;
  std::string subset = "test";
  std::string predictions;
  std::string level = "both";
  std::string out;
};

void run_evaluate(const EvaluateArgs& args) {
  const Corpus corpus = load_manifest(args.manifest);
  const SplitAssignment assignment = import_split(args.split, corpus);
  const PredictionSet preds = load_predictions(args.predictions);
  const Subset subset = subset_from_name(args.subset);

  json j;
  if (args.level == "utterance" || args.level == "system") {
    const Level level =
        args.level == "utterance" ? Level::utterance : Level::system;
    j = report_to_json(evaluate(corpus, assignment, subset, preds, level));
  } else if (args.level == "both") {
    j["utterance"] = report_to_json(
        evaluate(corpus, assignment, subset, preds, Level::utterance));
    j["system"] = report_to_json(
        evaluate(corpus, assignment, subset, preds, Level::system));
  } else {
    throw UsageError("--level must be utterance|system|both");
  }
  write_json(j, args.out);
  std::cout << "wrote " << args.out << "\n";
}

struct AnalyzeArgs {
  std::string manifest;
  std::string split;
  std::string subset = "test";
  std::string predictions;
  std::string categories = "speaker,system,text";
  double alpha = 0.05;
  std::string out;
};

void run_analyze(const AnalyzeArgs& args) {
  const Corpus corpus = load_manifest(args.manifest);
  const SplitAssignment assignment = import_split(args.split, corpus);
  const PredictionSet preds = load_predictions(args.predictions);
  std::vector<Category> categories;
  for (const auto& tok : split_on(args.categories, ',')) {
    categories.push_back(category_from_name(tok));
  }
  const UnseenAnalysis analysis =
      unseen_report(corpus, assignment, preds, subset_from_name(args.subset),
                    categories, args.alpha);
  write_json(analysis_to_json(analysis), args.out);
  for (const auto& c : analysis.categories) {
    std::cout << category_name(c.category) << ": seen "
              << format_double(c.seen.mean) << "+/-"
              << format_double(c.seen.stddev) << " (n=" << c.seen.count
              << "), unseen " << format_double(c.unseen.mean) << "+/-"
              << format_double(c.unseen.stddev) << " (n=" << c.unseen.count
              << "), p=" << format_double(c.t_test.p_value)
              << (c.unseen_harder ? "  [unseen harder]" : "") << "\n";
  }
  std::cout << "wrote " << args.out << "\n";
}

struct PlotArgs {
  std::string manifest;
  std::string split;
  std::string subset = "test";
  std::string predictions;
  std::string out;
};

std::string scatter_svg(const std::vector<SystemPair>& pairs,
                        const std::string& title) {
  const double size = 520.0, lo = 60.0, hi = 500.0;
  auto px = [&](double mos) { return lo + (mos - 1.0) / 4.0 * (hi - lo); };
  auto py = [&](double mos) { return hi - (mos - 1.0) / 4.0 * (hi - lo); };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
      << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << " " << size
      << "\">\n"
      << "<rect x=\"" << lo << "\" y=\"" << (size - hi) << "\" width=\""
      << (hi - lo) << "\" height=\"" << (hi - lo)
      << "\" fill=\"white\" stroke=\"black\"/>\n";
  for (int tick = 1; tick <= 5; ++tick) {
    svg << "<text x=\"" << px(tick) << "\" y=\"" << (hi + 18)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << tick << "</text>\n"
        << "<text x=\"" << (lo - 10) << "\" y=\"" << (py(tick) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << tick << "</text>\n";
  }
  svg << "<line x1=\"" << px(1.0) << "\" y1=\"" << py(1.0) << "\" x2=\""
      << px(5.0) << "\" y2=\"" << py(5.0)
      << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  for (const auto& p : pairs) {
    svg << "<circle cx=\"" << px(p.true_mos) << "\" cy=\"" << py(p.pred_mos)
        << "\" r=\"4\" fill=\"steelblue\" fill-opacity=\"0.7\">"
        << "<title>" << p.system_id << "</title></circle>\n";
  }
  svg << "<text x=\"" << (size / 2) << "\" y=\"" << (hi + 38)
      << "\" font-size=\"13\" text-anchor=\"middle\">true MOS</text>\n"
      << "<text x=\"16\" y=\"" << (size / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "16 "
      << (size / 2) << ")\">predicted MOS</text>\n"
      << "<text x=\"" << (size / 2)
      << "\" y=\"14\" font-size=\"14\" text-anchor=\"middle\">" << title
      << "</text>\n</svg>\n";
  return svg.str();
}

void run_plot(const PlotArgs& args) {
  const Corpus corpus = load_manifest(args.manifest);
  const SplitAssignment assignment = import_split(args.split, corpus);
  const PredictionSet preds = load_predictions(args.predictions);
  const Subset subset = subset_from_name(args.subset);

  // Same coverage rules as evaluate, via the same code path.
  evaluate(corpus, assignment, subset, preds, Level::system);

  const CorpusIndex index(corpus);
  const auto stats =
      utterance_stats(index, DroppedSet(assignment.dropped_ratings));
  std::unordered_map<std::string, std::string> system_of;
  for (const auto& u : corpus.utterances) {
    const auto it = assignment.subset_of.find(u.utterance_id);
    if (it != assignment.subset_of.end() && it->second == subset) {
      system_of.emplace(u.utterance_id, u.system_id);
    }
  }
  const auto pairs = system_aggregate(stats, preds, system_of);

  write_text_file(args.out,
                  scatter_svg(pairs, corpus.name + " (" + args.subset + ")"));
  std::filesystem::path csv_path(args.out);
  csv_path.replace_extension(".csv");
  std::string csv = "system_id,true_mos,predicted_mos\n";
  for (const auto& p : pairs) {
    csv += p.system_id + ',' + format_double(p.true_mos) + ',' +
           format_double(p.pred_mos) + '\n';
  }
  write_text_file(csv_path, csv);
  std::cout << "wrote " << args.out << " and " << csv_path.string() << " ("
            << pairs.size() << " systems)\n";
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"Listening-test corpus tools: balanced splits, MOS prediction "
               "metrics, seen/unseen error analysis, audio augmentation."};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd =
      app.add_subcommand("synth", "Generate a deterministic synthetic corpus");
  synth_cmd->add_option("--out", synth.out_dir, "Output directory")->required();
  synth_cmd->add_option("--systems", synth.spec.n_systems, "Number of systems");
  synth_cmd->add_option("--speakers", synth.spec.n_speakers,
                        "Number of speakers");
  synth_cmd->add_option("--texts", synth.spec.n_texts, "Number of texts");
  synth_cmd->add_option("--listeners", synth.spec.n_listeners,
                        "Number of listeners");
  synth_cmd->add_option("--utterances-per-system",
                        synth.spec.utterances_per_system,
                        "Utterances per system");
  synth_cmd->add_option("--ratings", synth.spec.ratings_per_utterance,
                        "Ratings per utterance");
  synth_cmd->add_option("--system-means", synth.system_means,
                        "Comma-separated per-system target means");
  synth_cmd->add_option("--spread", synth.spec.spread,
                        "Utterance and rating noise stddev");
  synth_cmd->add_option("--seed", synth.spec.seed, "Random seed");
  synth_cmd->add_option("--name", synth.spec.name, "Corpus name");
  synth_cmd->add_flag("--wav", synth.wav, "Also write tone WAV files");
  synth_cmd->add_option("--sample-rate", synth.sample_rate,
                        "Sample rate for --wav");
  synth_cmd->callback([&synth]() { run_synth(synth); });

  std::string validate_manifest, validate_out;
  auto* validate_cmd =
      app.add_subcommand("validate", "Load a manifest and check invariants");
  validate_cmd->add_option("--manifest", validate_manifest, "manifest.json")
      ->required();
  validate_cmd->add_option("--out", validate_out, "Validation report JSON");
  validate_cmd->callback(
      [&]() { run_validate(validate_manifest, validate_out); });

  std::string stats_manifest, stats_out;
  auto* stats_cmd = app.add_subcommand(
      "stats", "Per-system and per-utterance score statistics");
  stats_cmd->add_option("--manifest", stats_manifest, "manifest.json")
      ->required();
  stats_cmd->add_option("--out", stats_out, "Output JSON")->required();
  stats_cmd->callback([&]() { run_stats(stats_manifest, stats_out); });

  SplitArgs split;
  auto* split_cmd = app.add_subcommand(
      "split", "Search for a balanced train/dev/test split");
  split_cmd->add_option("--manifest", split.manifest, "manifest.json")
      ->required();
  split_cmd->add_option("--proportions", split.proportions,
                        "train,dev,test proportions");
  split_cmd->add_option("--unseen", split.unseen,
                        "Unseen counts, e.g. dev:spk=1,sys=6,lis=8,txt=5 "
                        "(repeatable)");
  split_cmd->add_option("--candidates", split.candidates,
                        "Number of candidate splits");
  split_cmd->add_option("--seed", split.seed, "Master seed");
  split_cmd->add_flag("--no-stddev-term", split.no_stddev_term,
                      "Drop the stddev terms from the objective");
  split_cmd->add_option("--threads", split.threads,
                        "Worker threads (0 = all cores)");
  split_cmd->add_option("--out", split.out, "Output split.csv")->required();
  split_cmd->callback([&split]() { run_split(split); });

  AugmentArgs augment;
  auto* augment_cmd =
      app.add_subcommand("augment", "Write augmented audio and manifest");
  augment_cmd->add_option("--manifest", augment.manifest, "manifest.json")
      ->required();
  augment_cmd->add_option("--out-dir", augment.out_dir, "Output directory")
      ->required();
  augment_cmd->add_option("--kinds", augment.kinds,
                          "all or comma list of speedup|slowdown|trim|pad");
  augment_cmd->add_option("--seed", augment.seed, "Random seed");
  augment_cmd->add_option("--speed-range", augment.speed_range,
                          "Speed factor range lo,hi (default 0.95,1.05)");
  augment_cmd->add_option("--silence-range", augment.silence_range,
                          "Silence seconds range lo,hi (default 0.05,0.25)");
  augment_cmd->callback([&augment]() { run_augment(augment); });

  BaselineArgs baseline;
  auto* baseline_cmd = app.add_subcommand(
      "baseline", "Fit a reference predictor on train and predict a subset");
  baseline_cmd->add_option("--manifest", baseline.manifest, "manifest.json")
      ->required();
  baseline_cmd->add_option("--split", baseline.split, "split.csv")->required();
  baseline_cmd->add_option("--kind", baseline.kind,
                           "global_mean|linear_features");
  baseline_cmd->add_option("--subset", baseline.subset,
                           "Subset to predict (default test)");
  baseline_cmd->add_option("--out", baseline.out, "Output predictions.csv")
      ->required();
  baseline_cmd->callback([&baseline]() { run_baseline(baseline); });

  EvaluateArgs evaluate_args;
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "Score predictions against one subset of a split");
  evaluate_cmd->add_option("--manifest", evaluate_args.manifest,
                           "manifest.json")
      ->required();
  evaluate_cmd->add_option("--split", evaluate_args.split, "split.csv")
      ->required();
  evaluate_cmd->add_option("--subset", evaluate_args.subset,
                           "train|dev|test (default test)");
  evaluate_cmd->add_option("--predictions", evaluate_args.predictions,
                           "predictions.csv")
      ->required();
  evaluate_cmd->add_option("--level", evaluate_args.level,
                           "utterance|system|both");
  evaluate_cmd->add_option("--out", evaluate_args.out, "Output report JSON")
      ->required();
  evaluate_cmd->callback([&evaluate_args]() { run_evaluate(evaluate_args); });

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand(
      "analyze-unseen", "Seen vs unseen squared-error significance analysis");
  analyze_cmd->add_option("--manifest", analyze.manifest, "manifest.json")
      ->required();
  analyze_cmd->add_option("--split", analyze.split, "split.csv")->required();
  analyze_cmd->add_option("--subset", analyze.subset,
                          "Subset to analyze (default test)");
  analyze_cmd->add_option("--predictions", analyze.predictions,
                          "predictions.csv")
      ->required();
  analyze_cmd->add_option("--categories", analyze.categories,
                          "Comma list of speaker|system|text|listener");
  analyze_cmd->add_option("--alpha", analyze.alpha, "Significance level");
  analyze_cmd->add_option("--out", analyze.out, "Output JSON")->required();
  analyze_cmd->callback([&analyze]() { run_analyze(analyze); });

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand(
      "plot", "System-level scatter plot (SVG + CSV sidecar)");
  plot_cmd->add_option("--manifest", plot.manifest, "manifest.json")
      ->required();
  plot_cmd->add_option("--split", plot.split, "split.csv")->required();
  plot_cmd->add_option("--subset", plot.subset, "Subset (default test)");
  plot_cmd->add_option("--predictions", plot.predictions, "predictions.csv")
      ->required();
  plot_cmd->add_option("--out", plot.out, "Output SVG")->required();
  plot_cmd->callback([&plot]() { run_plot(plot); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace
}  // namespace moseval

int main(int argc, char** argv) { return moseval::run(argc, argv); }

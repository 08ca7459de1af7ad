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

#ifndef MOSEVAL_TESTS_TEST_UTIL_HPP_
#define MOSEVAL_TESTS_TEST_UTIL_HPP_

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "moseval/corpus.hpp"

namespace moseval::testing {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0; attempt < 100; ++attempt) {
      auto candidate =
          base / ("moseval_test_" + std::to_string(std::rand()) + "_" +
                  std::to_string(attempt));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Builds an in-memory corpus from terse row tuples.
/// utterances: {id, system, speaker, text}
/// ratings: {utterance_id, listener_id, score}  (already on the [1,5] scale)
inline Corpus make_corpus(
    const std::vector<std::array<std::string, 4>>& utterances,
    const std::vector<std::tuple<std::string, std::string, double>>& ratings) {
  Corpus c;
  c.name = "fixture";
  c.scale = ScaleSpec{1.0, 5.0};
  for (const auto& u : utterances) {
    c.utterances.push_back(Utterance{u[0], u[1], u[2], u[3], ""});
  }
  for (const auto& [utt, lis, score] : ratings) {
    c.ratings.push_back(Rating{utt, lis, score});
  }
  return c;
}

/// Writes a manifest fixture (manifest.json plus both CSVs) and returns the
/// manifest path.
inline std::filesystem::path write_manifest_fixture(
    const std::filesystem::path& dir, const std::string& scale_lo,
    const std::string& scale_hi, const std::string& utterance_rows,
    const std::string& rating_rows) {
  write_file(dir / "utterances.csv",
             "utterance_id,system_id,speaker_id,text_id,audio_path\n" +
                 utterance_rows);
  write_file(dir / "ratings.csv",
             "utterance_id,listener_id,score\n" + rating_rows);
  write_file(dir / "manifest.json",
             "{\"name\": \"fixture\", \"scale\": {\"lo\": " + scale_lo +
                 ", \"hi\": " + scale_hi +
                 "}, \"utterances_csv\": \"utterances.csv\", "
                 "\"ratings_csv\": \"ratings.csv\"}\n");
  return dir / "manifest.json";
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs a shell command, capturing exit code, stdout and stderr.
inline CommandResult run_command(const std::string& command,
                                 const std::filesystem::path& scratch) {
  const auto out_path = scratch / "cmd_stdout.txt";
  const auto err_path = scratch / "cmd_stderr.txt";
  const std::string full = command + " >" + out_path.string() + " 2>" +
                           err_path.string();
  const int status = std::system(full.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

}  // namespace moseval::testing

#endif  // MOSEVAL_TESTS_TEST_UTIL_HPP_

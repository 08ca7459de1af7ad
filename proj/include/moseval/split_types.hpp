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

#ifndef MOSEVAL_SPLIT_TYPES_HPP_
#define MOSEVAL_SPLIT_TYPES_HPP_

#include <array>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "moseval/error.hpp"

namespace moseval {

enum class Subset { train = 0, dev = 1, test = 2 };

inline constexpr std::array<Subset, 3> kSubsets = {Subset::train, Subset::dev,
                                                   Subset::test};

inline const char* subset_name(Subset s) {
  switch (s) {
    case Subset::train: return "train";
    case Subset::dev: return "dev";
    case Subset::test: return "test";
  }
  return "?";
}

inline Subset subset_from_name(const std::string& name) {
  if (name == "train") return Subset::train;
  if (name == "dev") return Subset::dev;
  if (name == "test") return Subset::test;
  throw DataError("subset must be train|dev|test, got '" + name + "'");
}

/// Entities designated as unseen for one subset.  Lists are kept sorted so
/// that serialization is deterministic.
struct UnseenEntities {
  std::vector<std::string> speakers;
  std::vector<std::string> systems;
  std::vector<std::string> texts;
  std::vector<std::string> listeners;

  bool operator==(const UnseenEntities&) const = default;
};

struct DroppedRating {
  std::string utterance_id;
  std::string listener_id;

  bool operator==(const DroppedRating&) const = default;
};

/// A train/dev/test partition of a corpus.
///
/// `dropped_ratings` lists the ratings removed to keep designated unseen
/// listeners out of the other subsets; every downstream statistic ignores
/// them.
struct SplitAssignment {
  std::unordered_map<std::string, Subset> subset_of;
  std::array<UnseenEntities, 3> designated_unseen;  // indexed by Subset
  std::vector<DroppedRating> dropped_ratings;

  const UnseenEntities& unseen(Subset s) const {
    return designated_unseen[static_cast<std::size_t>(s)];
  }
  UnseenEntities& unseen(Subset s) {
    return designated_unseen[static_cast<std::size_t>(s)];
  }

  bool operator==(const SplitAssignment&) const = default;
};

/// Constant-time membership test over an assignment's dropped ratings.
class DroppedSet {
 public:
  DroppedSet() = default;
  explicit DroppedSet(const std::vector<DroppedRating>& dropped) {
    keys_.reserve(dropped.size());
    for (const auto& d : dropped) {
      keys_.insert(d.utterance_id + '\x1f' + d.listener_id);
    }
  }

  bool contains(const std::string& utterance_id,
                const std::string& listener_id) const {
    if (keys_.empty()) return false;
    return keys_.count(utterance_id + '\x1f' + listener_id) > 0;
  }

  bool empty() const { return keys_.empty(); }

 private:
  std::unordered_set<std::string> keys_;
};

}  // namespace moseval

#endif  // MOSEVAL_SPLIT_TYPES_HPP_

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

#ifndef MOSEVAL_ERROR_HPP_
#define MOSEVAL_ERROR_HPP_

#include <stdexcept>

namespace moseval {

// Error categories map 1:1 onto the CLI exit codes:
// UsageError -> 1, DataError -> 2, IoError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad invocation: unknown flag, malformed flag value, inconsistent options.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Well-formed request over bad or infeasible data: malformed CSV rows,
// dangling references, out-of-range scores, unsatisfiable split constraints.
class DataError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure: missing file, unreadable or truncated stream.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace moseval

#endif  // MOSEVAL_ERROR_HPP_

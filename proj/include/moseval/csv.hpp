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

#ifndef MOSEVAL_CSV_HPP_
#define MOSEVAL_CSV_HPP_

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "moseval/error.hpp"

namespace moseval {

// Row-oriented CSV with a mandatory header.  Fields are plain tokens split on
// commas: identifiers never contain commas or quotes, numbers use a '.'
// decimal point.  Malformed rows are rejected with their line number.
struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line number in the source file
};

struct CsvFile {
  std::vector<CsvRow> rows;  // header excluded
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline std::string join_csv(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += fields[i];
  }
  return out;
}

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double_field(const std::string& field,
                                 const std::filesystem::path& file,
                                 std::size_t line) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end || field.empty()) {
    std::ostringstream msg;
    msg << file.string() << ":" << line << ": not a number: '" << field << "'";
    throw DataError(msg.str());
  }
  return value;
}

inline long long parse_int_field(const std::string& field,
                                 const std::filesystem::path& file,
                                 std::size_t line) {
  long long value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end || field.empty()) {
    std::ostringstream msg;
    msg << file.string() << ":" << line << ": not an integer: '" << field << "'";
    throw DataError(msg.str());
  }
  return value;
}

/// Reads a CSV file, checks the header verbatim, and checks that every row
/// has exactly as many fields as the header.
inline CsvFile read_csv(const std::filesystem::path& path,
                        const std::vector<std::string>& expected_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());

  CsvFile out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos <= content.size()) {
    std::size_t nl = content.find('\n', pos);
    std::string line = content.substr(
        pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? content.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (pos > content.size()) break;  // trailing newline at end of file
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": empty line");
    }
    auto fields = detail::split_csv_line(line);
    if (!saw_header) {
      if (fields != expected_header) {
        throw DataError(path.string() + ":1: expected header '" +
                        join_csv(expected_header) + "', got '" + line + "'");
      }
      saw_header = true;
      continue;
    }
    if (fields.size() != expected_header.size()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected " + std::to_string(expected_header.size()) +
                      " fields, got " + std::to_string(fields.size()));
    }
    out.rows.push_back(CsvRow{std::move(fields), line_no});
  }
  if (!saw_header) throw DataError(path.string() + ": missing header");
  return out;
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace moseval

#endif  // MOSEVAL_CSV_HPP_

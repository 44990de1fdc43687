// Copyright 2026-present the gentricast authors
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

#pragma once

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gentricast::csv {

struct Record {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

/// RFC 4180 style table: header row, quoted fields may contain the
/// delimiter, doubled quotes and newlines. Blank lines are skipped and a
/// leading UTF-8 byte-order mark is dropped.
struct Table {
  std::string source;
  std::vector<std::string> header;
  std::vector<Record> records;

  std::optional<std::size_t> column(std::string_view name) const;
  /// Throws SchemaError when absent.
  std::size_t require(std::string_view name) const;
};

Table read(std::istream& in, std::string source, char delimiter = ',');
Table read_file(const std::filesystem::path& path, char delimiter = ',');

/// Quotes a field when it contains the delimiter, a quote or a line break.
std::string escape(std::string_view field, char delimiter = ',');

class Writer {
 public:
  explicit Writer(std::ostream& out, char delimiter = ',') : out_(out), delim_(delimiter) {}

  void row(const std::vector<std::string>& fields);
  void row(std::initializer_list<std::string_view> fields);

 private:
  std::ostream& out_;
  char delim_;
};

}  // namespace gentricast::csv

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

#include "gentricast/csv.hpp"

#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "gentricast/error.hpp"

namespace gentricast::csv {

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::require(std::string_view name) const {
  if (auto idx = column(name)) return *idx;
  throw SchemaError(source, std::string(name));
}

namespace {

bool is_blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields[0].empty();
}

}  // namespace

Table read(std::istream& in, std::string source, char delimiter) {
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::size_t pos = 0;
  if (data.size() >= 3 && data.compare(0, 3, "\xEF\xBB\xBF") == 0) pos = 3;

  Table table;
  table.source = std::move(source);

  std::size_t line = 1;
  bool have_header = false;
  while (pos < data.size()) {
    Record rec;
    rec.line = line;
    std::string field;
    bool in_quotes = false;
    bool end_of_record = false;
    while (pos < data.size() && !end_of_record) {
      const char c = data[pos];
      if (in_quotes) {
        if (c == '"') {
          if (pos + 1 < data.size() && data[pos + 1] == '"') {
            field.push_back('"');
            pos += 2;
            continue;
          }
          in_quotes = false;
          ++pos;
          continue;
        }
        if (c == '\n') ++line;
        field.push_back(c);
        ++pos;
        continue;
      }
      if (c == '"' && field.empty()) {
        in_quotes = true;
        ++pos;
      } else if (c == delimiter) {
        rec.fields.push_back(std::move(field));
        field.clear();
        ++pos;
      } else if (c == '\r' || c == '\n') {
        if (c == '\r' && pos + 1 < data.size() && data[pos + 1] == '\n') ++pos;
        ++pos;
        ++line;
        end_of_record = true;
      } else {
        field.push_back(c);
        ++pos;
      }
    }
    if (in_quotes) {
      throw IngestError(table.source + ":" + std::to_string(rec.line) +
                        ": unterminated quoted field");
    }
    rec.fields.push_back(std::move(field));
    if (is_blank(rec.fields)) continue;
    if (!have_header) {
      table.header = std::move(rec.fields);
      have_header = true;
    } else {
      table.records.push_back(std::move(rec));
    }
  }
  if (!have_header) throw IngestError(table.source + ": empty file (no header row)");
  return table;
}

Table read_file(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  return read(in, path.string(), delimiter);
}

std::string escape(std::string_view field, char delimiter) {
  const bool needs_quotes = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
                            std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void Writer::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << delim_;
    out_ << escape(fields[i], delim_);
  }
  out_ << '\n';
}

void Writer::row(std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (auto f : fields) {
    if (!first) out_ << delim_;
    first = false;
    out_ << escape(f, delim_);
  }
  out_ << '\n';
}

}  // namespace gentricast::csv

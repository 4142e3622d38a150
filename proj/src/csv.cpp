// Copyright 2026 The cycboost Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cycboost/csv.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "cycboost/error.hpp"

namespace cycboost {

std::vector<std::string> SplitCsvLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

Table ReadCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError("CSV input has no header line");
  }
  // Strip a UTF-8 byte order mark.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  const std::vector<std::string> header = SplitCsvLine(line);
  std::vector<TextColumn> cells(header.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = SplitCsvLine(line);
    if (fields.size() != header.size()) {
      throw ShapeError("CSV row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      cells[c].push_back(std::move(fields[c]));
    }
    ++row;
  }

  Table table;
  for (std::size_t c = 0; c < header.size(); ++c) {
    NumericColumn numeric;
    numeric.reserve(cells[c].size());
    bool all_numeric = true;
    for (const std::string& cell : cells[c]) {
      const auto parsed = ParseNumber(cell);
      if (!parsed && !IsMissingText(cell)) {
        all_numeric = false;
        break;
      }
      numeric.push_back(parsed.value_or(std::numeric_limits<double>::quiet_NaN()));
    }
    if (all_numeric) {
      table.AddColumn(header[c], std::move(numeric));
    } else {
      table.AddColumn(header[c], std::move(cells[c]));
    }
  }
  return table;
}

Table ReadCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return ReadCsv(in);
}

namespace {

void WriteField(std::ostream& out, const std::string& text) {
  if (text.find_first_of(",\"") == std::string::npos) {
    out << text;
    return;
  }
  out << '"';
  for (const char c : text) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void WriteCsv(std::ostream& out, const Table& table) {
  const auto& names = table.names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) out << ',';
    WriteField(out, names[c]);
  }
  out << '\n';
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (c) out << ',';
      const Column& column = table.GetColumn(names[c]);
      if (const auto* numeric = std::get_if<NumericColumn>(&column)) {
        const double v = (*numeric)[r];
        if (!std::isnan(v)) out << FormatNumber(v);
      } else {
        WriteField(out, std::get<TextColumn>(column)[r]);
      }
    }
    out << '\n';
  }
}

void WriteCsvFile(const std::string& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  WriteCsv(out, table);
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace cycboost

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

#include "cycboost/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "cycboost/error.hpp"

namespace cycboost {

std::size_t ColumnSize(const Column& column) {
  return std::visit([](const auto& c) { return c.size(); }, column);
}

bool IsMissingText(std::string_view text) {
  return text.empty() || text == "NA" || text == "NaN" || text == "nan" ||
         text == "null";
}

std::optional<double> ParseNumber(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (IsMissingText(text)) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

std::string FormatNumber(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void Table::AddColumn(std::string name, Column column) {
  if (HasColumn(name)) {
    throw SchemaError("duplicate column '" + name + "'");
  }
  const std::size_t size = ColumnSize(column);
  if (!names_.empty() && size != num_rows_) {
    throw ShapeError("column '" + name + "' has " + std::to_string(size) +
                     " rows, expected " + std::to_string(num_rows_));
  }
  num_rows_ = size;
  names_.push_back(std::move(name));
  columns_.push_back(std::move(column));
}

bool Table::HasColumn(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const Column& Table::GetColumn(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw SchemaError("missing column '" + std::string(name) + "'");
  }
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

NumericColumn Table::GetNumeric(std::string_view name) const {
  const Column& column = GetColumn(name);
  if (const auto* numeric = std::get_if<NumericColumn>(&column)) {
    return *numeric;
  }
  const auto& text = std::get<TextColumn>(column);
  NumericColumn out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto parsed = ParseNumber(text[i]);
    if (!parsed && !IsMissingText(text[i])) {
      throw DataError("column '" + std::string(name) + "' row " +
                      std::to_string(i) + ": '" + text[i] +
                      "' is not a number");
    }
    out[i] = parsed.value_or(std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

Table Table::Take(const std::vector<std::size_t>& rows) const {
  Table out;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    Column taken = std::visit(
        [&rows](const auto& source) -> Column {
          std::decay_t<decltype(source)> dest;
          dest.reserve(rows.size());
          for (const std::size_t r : rows) dest.push_back(source.at(r));
          return dest;
        },
        columns_[c]);
    out.AddColumn(names_[c], std::move(taken));
  }
  return out;
}

}  // namespace cycboost

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

#ifndef CYCBOOST_TABLE_HPP_
#define CYCBOOST_TABLE_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cycboost {

using NumericColumn = std::vector<double>;
using TextColumn = std::vector<std::string>;

// A raw feature column. Numeric missing values are NaN; text missing values
// are the markers recognised by IsMissingText().
using Column = std::variant<NumericColumn, TextColumn>;

std::size_t ColumnSize(const Column& column);

bool IsMissingText(std::string_view text);

// Parses a full string as a double. Returns nullopt for missing markers and
// for anything that is not a complete number.
std::optional<double> ParseNumber(std::string_view text);

// Shortest representation that round-trips; used as the categorical label of
// a numeric value.
std::string FormatNumber(double value);

// Column-oriented table of named raw columns with equal lengths.
class Table {
 public:
  Table() = default;

  // Throws ShapeError on length mismatch and SchemaError on duplicate names.
  void AddColumn(std::string name, Column column);

  bool HasColumn(std::string_view name) const;
  // Throws SchemaError when absent.
  const Column& GetColumn(std::string_view name) const;

  const std::vector<std::string>& names() const { return names_; }
  std::size_t num_rows() const { return num_rows_; }
  std::size_t num_columns() const { return names_.size(); }

  // Numeric view of a column; text columns are parsed cell by cell and any
  // non-missing cell that fails to parse raises DataError with its row.
  NumericColumn GetNumeric(std::string_view name) const;

  // Rows selected by index, in the given order.
  Table Take(const std::vector<std::size_t>& rows) const;

 private:
  std::vector<std::string> names_;
  std::vector<Column> columns_;
  std::size_t num_rows_ = 0;
};

}  // namespace cycboost

#endif  // CYCBOOST_TABLE_HPP_

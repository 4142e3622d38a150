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

#ifndef CYCBOOST_CSV_HPP_
#define CYCBOOST_CSV_HPP_

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cycboost/table.hpp"

namespace cycboost {

// Splits one CSV record. Double-quoted fields may contain commas and "" as an
// escaped quote; no multi-line fields.
std::vector<std::string> SplitCsvLine(std::string_view line);

// Reads a header + rows CSV. A column becomes numeric when every non-missing
// cell parses as a number, text otherwise. Ragged rows raise ShapeError.
Table ReadCsv(std::istream& in);
Table ReadCsvFile(const std::string& path);  // IoError when unreadable

void WriteCsv(std::ostream& out, const Table& table);
void WriteCsvFile(const std::string& path, const Table& table);

}  // namespace cycboost

#endif  // CYCBOOST_CSV_HPP_

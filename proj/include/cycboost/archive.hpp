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

// Model archives: versioned JSON text. Doubles are written in the shortest
// decimal form that parses back to the same binary value, so a load of a save
// reproduces every number bit for bit.

#ifndef CYCBOOST_ARCHIVE_HPP_
#define CYCBOOST_ARCHIVE_HPP_

#include <string>

#include "cycboost/engine.hpp"

namespace cycboost {

std::string SaveModelToString(const Model& model);
// Throws FormatError on malformed input or a format_version other than
// Model::kFormatVersion.
Model LoadModelFromString(const std::string& text);

// Throw IoError when the file cannot be written or read.
void SaveModel(const Model& model, const std::string& path);
Model LoadModel(const std::string& path);

// Canonical JSON of a training configuration (custom hooks omitted).
std::string ConfigToJson(const TrainingConfig& config);
TrainingConfig ConfigFromJson(const std::string& text);

}  // namespace cycboost

#endif  // CYCBOOST_ARCHIVE_HPP_

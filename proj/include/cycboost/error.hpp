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

#ifndef CYCBOOST_ERROR_HPP_
#define CYCBOOST_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace cycboost {

enum class ErrorCode {
  kFit,
  kShape,
  kData,
  kMode,
  kDomain,
  kDegenerateTarget,
  kDegenerateWeights,
  kSchema,
  kSplit,
  kIo,
  kFormat,
};

// Base of every exception the library throws. The code drives the CLI exit
// status mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define CYCBOOST_DEFINE_ERROR(Name, Code)                      \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& what) : Error(Code, what) {} \
  }

CYCBOOST_DEFINE_ERROR(FitError, ErrorCode::kFit);
CYCBOOST_DEFINE_ERROR(ShapeError, ErrorCode::kShape);
CYCBOOST_DEFINE_ERROR(DataError, ErrorCode::kData);
CYCBOOST_DEFINE_ERROR(ModeError, ErrorCode::kMode);
CYCBOOST_DEFINE_ERROR(DomainError, ErrorCode::kDomain);
CYCBOOST_DEFINE_ERROR(DegenerateTargetError, ErrorCode::kDegenerateTarget);
CYCBOOST_DEFINE_ERROR(DegenerateWeightsError, ErrorCode::kDegenerateWeights);
CYCBOOST_DEFINE_ERROR(SchemaError, ErrorCode::kSchema);
CYCBOOST_DEFINE_ERROR(SplitError, ErrorCode::kSplit);
CYCBOOST_DEFINE_ERROR(IoError, ErrorCode::kIo);
CYCBOOST_DEFINE_ERROR(FormatError, ErrorCode::kFormat);

#undef CYCBOOST_DEFINE_ERROR

}  // namespace cycboost

#endif  // CYCBOOST_ERROR_HPP_

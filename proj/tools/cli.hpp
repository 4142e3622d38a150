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

#ifndef CYCBOOST_TOOLS_CLI_HPP_
#define CYCBOOST_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "cycboost/error.hpp"

namespace cycboost::cli {

// Exit status: 0 ok, 2 usage/schema, 3 mode/domain/data, 4 io/format.
int ExitCodeFor(ErrorCode code);

// args excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cycboost::cli

#endif  // CYCBOOST_TOOLS_CLI_HPP_

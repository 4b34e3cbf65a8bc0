// Copyright 2026 The replaydf-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REPLAYDF_CLI_HPP_
#define REPLAYDF_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace replaydf::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

// Runs the toolkit CLI. args[0] is the program name. Human-readable summaries
// go to `out`; diagnostics are logged to stderr.
int run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace replaydf::cli

#endif  // REPLAYDF_CLI_HPP_

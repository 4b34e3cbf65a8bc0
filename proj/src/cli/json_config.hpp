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

#ifndef REPLAYDF_CLI_JSON_CONFIG_HPP_
#define REPLAYDF_CLI_JSON_CONFIG_HPP_

#include <set>
#include <string>

#include "CLI11.hpp"

namespace replaydf::cli {

// JSON config files for CLI11. Keys are long option names. A nested object
// keyed by a subcommand name applies to that subcommand; flat keys that are
// not global options apply to `section` (the subcommand being run).
class JsonConfig : public CLI::Config {
 public:
  JsonConfig(std::string section, std::set<std::string> global_options)
      : section_(std::move(section)), globals_(std::move(global_options)) {}

  std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;

 private:
  std::string section_;
  std::set<std::string> globals_;
};

}  // namespace replaydf::cli

#endif  // REPLAYDF_CLI_JSON_CONFIG_HPP_

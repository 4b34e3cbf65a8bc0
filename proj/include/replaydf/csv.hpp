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

#ifndef REPLAYDF_CSV_HPP_
#define REPLAYDF_CSV_HPP_

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace replaydf::csv {

struct Row {
  std::size_t line = 0;  // 1-based line in the source
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  // Column index by header name.
  std::optional<std::size_t> column(std::string_view name) const;
};

// RFC 4180 subset: comma separated, double-quoted fields with "" escapes,
// no embedded newlines. Surrounding whitespace of unquoted fields is trimmed
// and blank lines are skipped.
std::vector<std::string> split_line(std::string_view line);
Table read(std::istream& in);
Table read(const std::filesystem::path& path);

std::string escape(std::string_view field);

}  // namespace replaydf::csv

#endif  // REPLAYDF_CSV_HPP_

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

#ifndef REPLAYDF_PATHS_HPP_
#define REPLAYDF_PATHS_HPP_

#include <filesystem>
#include <string>

namespace replaydf {

// Paths written to manifests and reports are relative to a declared root.
inline std::filesystem::path resolve(const std::filesystem::path& root,
                                     const std::string& stored) {
  const std::filesystem::path p(stored);
  return p.is_absolute() ? p : root / p;
}

inline std::string relativize(const std::filesystem::path& path,
                              const std::filesystem::path& root) {
  const auto abs_path = std::filesystem::absolute(path).lexically_normal();
  const auto abs_root = std::filesystem::absolute(root).lexically_normal();
  auto rel = abs_path.lexically_relative(abs_root);
  if (rel.empty()) return abs_path.generic_string();
  return rel.generic_string();
}

}  // namespace replaydf

#endif  // REPLAYDF_PATHS_HPP_

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

#ifndef REPLAYDF_MANIFEST_HPP_
#define REPLAYDF_MANIFEST_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "replaydf/errors.hpp"

namespace replaydf {

enum class Label { kSpoof, kBonaFide };
enum class Architecture { kBark, kVits, kXttsV11, kXttsV20 };
enum class Language { kEn, kDe, kFr, kIt, kPl, kEs };

inline constexpr std::array<Language, 6> kLanguages = {
    Language::kEn, Language::kDe, Language::kFr,
    Language::kIt, Language::kPl, Language::kEs};
inline constexpr std::array<Architecture, 4> kArchitectures = {
    Architecture::kBark, Architecture::kVits, Architecture::kXttsV11,
    Architecture::kXttsV20};

// Entries per setup for one selection count: languages x architectures x
// {spoof, bona fide}.
inline constexpr std::size_t kEntriesPerUidPerN =
    kLanguages.size() * kArchitectures.size() * 2;

std::string_view to_string(Label label) noexcept;
std::string_view to_string(Architecture arch) noexcept;
std::string_view to_string(Language lang) noexcept;

// Canonical names plus the aliases found in the wild ("bonafide",
// "XTTS v2.0", "sp" for Spanish, ...). Throw InputError on anything else.
Label parse_label(std::string_view text);
Architecture parse_architecture(std::string_view text);
Language parse_language(std::string_view text);

// Display name used in report tables: Bark, VITS, XTTS v1.1, XTTS v2.
std::string_view display_name(Architecture arch) noexcept;

// The group key used for per-attack breakdowns: architecture name, or
// "bona fide".
inline constexpr std::string_view kBonaFideGroup = "bona fide";

struct ManifestEntry {
  std::string original_file;
  std::string recorded_file;  // empty until processed
  Label label = Label::kBonaFide;
  std::optional<Architecture> architecture;  // absent for bona fide
  Language language = Language::kEn;
  std::string mic;
  std::string speaker;
  std::string uid;
  std::optional<std::string> setup_jpg;  // opaque; never opened
  // Fields not part of the schema, preserved verbatim on round trip.
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  // Empty if the entry satisfies the label/architecture invariant.
  std::optional<std::string> invariant_violation() const;
  std::string group() const;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_per_cell;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

// Files available per cell. Spoof pools are keyed by (language,
// architecture); bona fide pools by language alone.
class AudioPool {
 public:
  using Key = std::pair<Language, std::optional<Architecture>>;

  explicit AudioPool(Label label) : label_(label) {}

  Label label() const noexcept { return label_; }
  void add(Language lang, std::optional<Architecture> arch, std::string path);
  const std::vector<std::string>& cell(Language lang,
                                       std::optional<Architecture> arch) const;
  const std::map<Key, std::vector<std::string>>& cells() const noexcept {
    return cells_;
  }

 private:
  Label label_;
  std::map<Key, std::vector<std::string>> cells_;
};

// Thrown when pool cells hold fewer than n files; the message names every
// short cell and its shortfall.
class PoolShortfallError : public InputError {
 public:
  using InputError::InputError;
};

// For each uid, language and architecture: n spoof files from the
// (language, architecture) cell followed by n bona fide files from the
// language cell, each drawn without replacement with a sub-seed hashed from
// (seed, uid, language, architecture, label).
Manifest build_manifest(const AudioPool& bona_pool, const AudioPool& spoof_pool,
                        const std::vector<std::string>& uids, std::size_t n,
                        std::uint64_t seed);

struct BalanceCounts {
  std::size_t spoof = 0;
  std::size_t bona_fide = 0;
  std::size_t total() const noexcept { return spoof + bona_fide; }
  friend bool operator==(const BalanceCounts&, const BalanceCounts&) = default;
};

// Violations are grouped per uid: one record per offending setup.
struct BalanceViolation {
  std::string uid;
  std::vector<std::string> details;
};

struct ValidationReport {
  std::map<std::string, BalanceCounts> per_uid;
  std::map<Language, BalanceCounts> per_language;
  std::vector<BalanceViolation> violations;
  bool valid() const noexcept { return violations.empty(); }
};

ValidationReport validate_manifest(const Manifest& manifest);

// JSONL, one entry per line. An optional first line {"#manifest": {...}}
// carries seed and n_per_cell.
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const Manifest& manifest, std::ostream& out);
Manifest read_manifest(std::istream& in);

nlohmann::ordered_json entry_to_json(const ManifestEntry& entry);
ManifestEntry entry_from_json(const nlohmann::ordered_json& j);

// Pool definition file: JSON array (or {"pools": [...]}) of objects
// {label, language[, architecture], globs: [...], files: [...]}. Globs and
// files are resolved against `root`; stored paths are relative to it.
struct PoolSet {
  AudioPool bona{Label::kBonaFide};
  AudioPool spoof{Label::kSpoof};
};
PoolSet load_pools(const std::filesystem::path& definition,
                   const std::filesystem::path& root);

}  // namespace replaydf

#endif  // REPLAYDF_MANIFEST_HPP_

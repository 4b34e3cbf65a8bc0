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

#include "replaydf/manifest.hpp"

#include <glob.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "replaydf/paths.hpp"
#include "replaydf/random.hpp"

namespace replaydf {
namespace {

constexpr std::string_view kHeaderKey = "#manifest";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Label label) noexcept {
  return label == Label::kSpoof ? "spoof" : "bona fide";
}

std::string_view to_string(Architecture arch) noexcept {
  switch (arch) {
    case Architecture::kBark: return "bark";
    case Architecture::kVits: return "vits";
    case Architecture::kXttsV11: return "xtts_v1.1";
    case Architecture::kXttsV20: return "xtts_v2.0";
  }
  return "bark";
}

std::string_view display_name(Architecture arch) noexcept {
  switch (arch) {
    case Architecture::kBark: return "Bark";
    case Architecture::kVits: return "VITS";
    case Architecture::kXttsV11: return "XTTS v1.1";
    case Architecture::kXttsV20: return "XTTS v2";
  }
  return "Bark";
}

std::string_view to_string(Language lang) noexcept {
  switch (lang) {
    case Language::kEn: return "en";
    case Language::kDe: return "de";
    case Language::kFr: return "fr";
    case Language::kIt: return "it";
    case Language::kPl: return "pl";
    case Language::kEs: return "es";
  }
  return "en";
}

Label parse_label(std::string_view text) {
  const std::string t = lower(text);
  if (t == "spoof") return Label::kSpoof;
  if (t == "bona fide" || t == "bonafide" || t == "bona-fide" ||
      t == "bona_fide" || t == "bona~fide") {
    return Label::kBonaFide;
  }
  throw InputError("unknown label '" + std::string(text) + "'");
}

Architecture parse_architecture(std::string_view text) {
  std::string t = lower(text);
  std::replace(t.begin(), t.end(), ' ', '_');
  if (t == "bark") return Architecture::kBark;
  if (t == "vits") return Architecture::kVits;
  if (t == "xtts_v1.1" || t == "xtts_v1") return Architecture::kXttsV11;
  if (t == "xtts_v2.0" || t == "xtts_v2") return Architecture::kXttsV20;
  throw InputError("unknown architecture '" + std::string(text) + "'");
}

Language parse_language(std::string_view text) {
  const std::string t = lower(text);
  for (Language l : kLanguages) {
    if (t == to_string(l)) return l;
  }
  if (t == "sp") return Language::kEs;
  throw InputError("unknown language '" + std::string(text) + "'");
}

std::optional<std::string> ManifestEntry::invariant_violation() const {
  if (label == Label::kBonaFide && architecture) {
    return "bona fide entry '" + original_file + "' carries an architecture";
  }
  if (label == Label::kSpoof && !architecture) {
    return "spoof entry '" + original_file + "' has no architecture";
  }
  return std::nullopt;
}

std::string ManifestEntry::group() const {
  if (label == Label::kBonaFide || !architecture) return std::string(kBonaFideGroup);
  return std::string(to_string(*architecture));
}

void AudioPool::add(Language lang, std::optional<Architecture> arch,
                    std::string path) {
  if (label_ == Label::kSpoof && !arch) {
    throw InputError("spoof pool cells need an architecture");
  }
  if (label_ == Label::kBonaFide) arch.reset();
  cells_[{lang, arch}].push_back(std::move(path));
}

const std::vector<std::string>& AudioPool::cell(
    Language lang, std::optional<Architecture> arch) const {
  static const std::vector<std::string> kEmpty;
  if (label_ == Label::kBonaFide) arch.reset();
  const auto it = cells_.find({lang, arch});
  return it == cells_.end() ? kEmpty : it->second;
}

namespace {

std::vector<std::string> choose(const std::vector<std::string>& cell,
                                std::size_t n, std::uint64_t seed) {
  // Partial Fisher-Yates: the first n slots are a uniform draw without
  // replacement.
  std::vector<std::size_t> idx(cell.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.index(idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.push_back(cell[idx[i]]);
  }
  return out;
}

std::string cell_name(Label label, Language lang,
                      std::optional<Architecture> arch) {
  std::string s = std::string(to_string(label)) + "(" + std::string(to_string(lang));
  if (arch) s += ", " + std::string(to_string(*arch));
  return s + ")";
}

}  // namespace

Manifest build_manifest(const AudioPool& bona_pool, const AudioPool& spoof_pool,
                        const std::vector<std::string>& uids, std::size_t n,
                        std::uint64_t seed) {
  if (bona_pool.label() != Label::kBonaFide || spoof_pool.label() != Label::kSpoof) {
    throw InputError("build_manifest: pools passed with the wrong labels");
  }
  Manifest m;
  m.seed = seed;
  m.n_per_cell = n;
  if (n == 0) return m;

  std::vector<std::string> shortfalls;
  for (Language lang : kLanguages) {
    const auto have = bona_pool.cell(lang, std::nullopt).size();
    if (have < n) {
      shortfalls.push_back(cell_name(Label::kBonaFide, lang, std::nullopt) +
                           " has " + std::to_string(have) + ", short by " +
                           std::to_string(n - have));
    }
    for (Architecture arch : kArchitectures) {
      const auto have_spoof = spoof_pool.cell(lang, arch).size();
      if (have_spoof < n) {
        shortfalls.push_back(cell_name(Label::kSpoof, lang, arch) + " has " +
                             std::to_string(have_spoof) + ", short by " +
                             std::to_string(n - have_spoof));
      }
    }
  }
  if (!shortfalls.empty()) {
    std::string msg = "pool cells smaller than n=" + std::to_string(n) + ":";
    for (const auto& s : shortfalls) msg += "\n  " + s;
    throw PoolShortfallError(msg);
  }

  std::set<std::string> seen;
  for (const auto& uid : uids) {
    if (uid.empty()) throw InputError("empty uid");
    if (!seen.insert(uid).second) throw InputError("duplicate uid '" + uid + "'");
  }

  m.entries.reserve(uids.size() * kEntriesPerUidPerN * n);
  for (const auto& uid : uids) {
    for (Language lang : kLanguages) {
      const std::string lang_name(to_string(lang));
      for (Architecture arch : kArchitectures) {
        const std::string arch_name(to_string(arch));
        const auto spoof = choose(
            spoof_pool.cell(lang, arch), n,
            derive_seed(seed, {uid, lang_name, arch_name, to_string(Label::kSpoof)}));
        const auto bona = choose(
            bona_pool.cell(lang, std::nullopt), n,
            derive_seed(seed, {uid, lang_name, arch_name, to_string(Label::kBonaFide)}));
        for (const auto& f : spoof) {
          ManifestEntry e;
          e.original_file = f;
          e.label = Label::kSpoof;
          e.architecture = arch;
          e.language = lang;
          e.uid = uid;
          m.entries.push_back(std::move(e));
        }
        for (const auto& f : bona) {
          ManifestEntry e;
          e.original_file = f;
          e.label = Label::kBonaFide;
          e.language = lang;
          e.uid = uid;
          m.entries.push_back(std::move(e));
        }
      }
    }
  }
  return m;
}

ValidationReport validate_manifest(const Manifest& manifest) {
  ValidationReport report;
  struct UidStats {
    BalanceCounts counts;
    std::map<Language, std::size_t> per_language;
    std::map<std::pair<Language, Architecture>, std::vector<std::string>> spoof_cells;
    std::vector<std::string> entry_problems;
  };
  std::map<std::string, UidStats> stats;
  std::vector<std::string> order;

  for (const auto& e : manifest.entries) {
    auto [it, inserted] = stats.try_emplace(e.uid);
    if (inserted) order.push_back(e.uid);
    UidStats& s = it->second;
    if (auto problem = e.invariant_violation()) s.entry_problems.push_back(*problem);
    auto& lang_counts = report.per_language[e.language];
    if (e.label == Label::kSpoof) {
      ++s.counts.spoof;
      ++lang_counts.spoof;
      if (e.architecture) {
        s.spoof_cells[{e.language, *e.architecture}].push_back(e.original_file);
      }
    } else {
      ++s.counts.bona_fide;
      ++lang_counts.bona_fide;
    }
    ++s.per_language[e.language];
  }

  for (const auto& uid : order) {
    const UidStats& s = stats.at(uid);
    report.per_uid[uid] = s.counts;

    std::size_t n = 0;
    if (manifest.n_per_cell) {
      n = *manifest.n_per_cell;
    } else {
      for (const auto& [cell, files] : s.spoof_cells) n = std::max(n, files.size());
    }

    BalanceViolation v{uid, s.entry_problems};
    if (s.counts.spoof != s.counts.bona_fide) {
      v.details.push_back("spoof/bona fide imbalance: " + std::to_string(s.counts.spoof) +
                          " spoof vs " + std::to_string(s.counts.bona_fide) +
                          " bona fide");
    }
    if (s.counts.total() != kEntriesPerUidPerN * n) {
      v.details.push_back("expected " + std::to_string(kEntriesPerUidPerN * n) +
                          " entries, found " + std::to_string(s.counts.total()));
    }
    for (Language lang : kLanguages) {
      const auto it = s.per_language.find(lang);
      const std::size_t got = it == s.per_language.end() ? 0 : it->second;
      const std::size_t want = 2 * kArchitectures.size() * n;
      if (got != want) {
        v.details.push_back("language " + std::string(to_string(lang)) +
                            ": expected " + std::to_string(want) + ", found " +
                            std::to_string(got));
      }
      for (Architecture arch : kArchitectures) {
        const auto cell = s.spoof_cells.find({lang, arch});
        const std::size_t have = cell == s.spoof_cells.end() ? 0 : cell->second.size();
        if (have != n) {
          v.details.push_back("cell (" + std::string(to_string(lang)) + ", " +
                              std::string(to_string(arch)) + "): expected " +
                              std::to_string(n) + " spoof, found " +
                              std::to_string(have));
        }
        if (cell != s.spoof_cells.end()) {
          std::set<std::string> unique(cell->second.begin(), cell->second.end());
          if (unique.size() != cell->second.size()) {
            v.details.push_back("cell (" + std::string(to_string(lang)) + ", " +
                                std::string(to_string(arch)) +
                                ") repeats a source file");
          }
        }
      }
    }
    if (!v.details.empty()) report.violations.push_back(std::move(v));
  }
  return report;
}

nlohmann::ordered_json entry_to_json(const ManifestEntry& e) {
  nlohmann::ordered_json j;
  j["original_file"] = e.original_file;
  j["recorded_file"] = e.recorded_file;
  j["label"] = to_string(e.label);
  if (e.architecture) {
    j["architecture"] = to_string(*e.architecture);
  } else {
    j["architecture"] = nullptr;
  }
  j["language"] = to_string(e.language);
  j["mic"] = e.mic;
  j["speaker"] = e.speaker;
  j["uid"] = e.uid;
  if (e.setup_jpg) j["setup_jpg"] = *e.setup_jpg;
  for (const auto& [k, v] : e.extra.items()) j[k] = v;
  return j;
}

namespace {

std::string required_string(const nlohmann::ordered_json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw InputError(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

std::string optional_string(const nlohmann::ordered_json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) throw InputError(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

}  // namespace

ManifestEntry entry_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw InputError("entry is not a JSON object");
  static const std::set<std::string> kKnown = {
      "original_file", "recorded_file", "label", "architecture", "language",
      "mic", "speaker", "uid", "setup_jpg"};
  ManifestEntry e;
  e.original_file = required_string(j, "original_file");
  e.recorded_file = optional_string(j, "recorded_file");
  e.label = parse_label(required_string(j, "label"));
  const std::string arch = optional_string(j, "architecture");
  if (!arch.empty()) e.architecture = parse_architecture(arch);
  e.language = parse_language(required_string(j, "language"));
  e.mic = optional_string(j, "mic");
  e.speaker = optional_string(j, "speaker");
  e.uid = optional_string(j, "uid");
  if (j.contains("setup_jpg") && !j["setup_jpg"].is_null()) {
    e.setup_jpg = optional_string(j, "setup_jpg");
  }
  for (const auto& [k, v] : j.items()) {
    if (!kKnown.contains(k)) e.extra[k] = v;
  }
  if (auto problem = e.invariant_violation()) throw InputError(*problem);
  return e;
}

void write_manifest(const Manifest& manifest, std::ostream& out) {
  if (manifest.seed || manifest.n_per_cell) {
    nlohmann::ordered_json header = nlohmann::ordered_json::object();
    if (manifest.seed) header["seed"] = *manifest.seed;
    if (manifest.n_per_cell) header["n_per_cell"] = *manifest.n_per_cell;
    out << nlohmann::ordered_json{{kHeaderKey, header}}.dump() << '\n';
  }
  for (const auto& e : manifest.entries) out << entry_to_json(e).dump() << '\n';
}

Manifest read_manifest(std::istream& in) {
  Manifest m;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (first && j.is_object() && j.contains(kHeaderKey)) {
      const auto& h = j[kHeaderKey];
      if (h.contains("seed")) m.seed = h["seed"].get<std::uint64_t>();
      if (h.contains("n_per_cell")) m.n_per_cell = h["n_per_cell"].get<std::size_t>();
      first = false;
      continue;
    }
    first = false;
    try {
      m.entries.push_back(entry_from_json(j));
    } catch (const InputError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return m;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_manifest(manifest, out);
  if (!out) throw IoError("write failed: " + path.string());
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_manifest(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

namespace {

std::vector<std::string> expand_glob(const std::filesystem::path& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> out;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH) {
    throw IoError("glob failed for pattern " + pattern.string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PoolSet load_pools(const std::filesystem::path& definition,
                   const std::filesystem::path& root) {
  std::ifstream in(definition);
  if (!in) throw IoError("cannot open " + definition.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(definition.string() + ": " + e.what());
  }
  const nlohmann::json& list = doc.is_object() && doc.contains("pools") ? doc["pools"] : doc;
  if (!list.is_array()) throw InputError(definition.string() + ": expected an array of pool cells");

  PoolSet pools;
  std::size_t index = 0;
  for (const auto& cell : list) {
    try {
      const Label label = parse_label(cell.at("label").get<std::string>());
      const Language lang = parse_language(cell.at("language").get<std::string>());
      std::optional<Architecture> arch;
      if (cell.contains("architecture") && !cell["architecture"].is_null()) {
        arch = parse_architecture(cell["architecture"].get<std::string>());
      }
      if (label == Label::kSpoof && !arch) throw InputError("spoof cell without architecture");
      AudioPool& pool = label == Label::kSpoof ? pools.spoof : pools.bona;
      std::vector<std::string> paths;
      for (const auto& pattern : cell.value("globs", nlohmann::json::array())) {
        for (auto& p : expand_glob(resolve(root, pattern.get<std::string>()))) {
          paths.push_back(relativize(p, root));
        }
      }
      for (const auto& f : cell.value("files", nlohmann::json::array())) {
        paths.push_back(f.get<std::string>());
      }
      for (auto& p : paths) pool.add(lang, arch, std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(definition.string() + ": pool cell " + std::to_string(index) +
                       ": " + e.what());
    }
    ++index;
  }
  return pools;
}

}  // namespace replaydf

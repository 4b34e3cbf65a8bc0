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

#include "replaydf/cli.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "json_config.hpp"
#include "replaydf/audio.hpp"
#include "replaydf/detector.hpp"
#include "replaydf/errors.hpp"
#include "replaydf/manifest.hpp"
#include "replaydf/metrics.hpp"
#include "replaydf/noise.hpp"
#include "replaydf/parallel.hpp"
#include "replaydf/paths.hpp"
#include "replaydf/random.hpp"
#include "replaydf/replay.hpp"
#include "replaydf/report.hpp"

namespace replaydf::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::shared_ptr<spdlog::logger> log() {
  static const auto logger = [] {
    auto l = std::make_shared<spdlog::logger>(
        "replaydf", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("[%l] %v");
    return l;
  }();
  return logger;
}

struct Globals {
  unsigned workers = 1;
  std::string log_level = "info";
};

WavEncoding parse_encoding(const std::string& name) {
  if (name == "float32") return WavEncoding::kFloat32;
  if (name == "pcm16") return WavEncoding::kPcm16;
  throw InputError("unknown encoding '" + name + "' (expected float32 or pcm16)");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_manifest_file(const Manifest& m, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_manifest(m, path);
}

void write_jsonl(const fs::path& path, const std::vector<ojson>& lines) {
  std::string text;
  for (const auto& l : lines) text += l.dump() + "\n";
  write_text(path, text);
}

// Output location for a stored (root-relative) input path.
fs::path output_path(const fs::path& out_dir, const std::string& stored,
                     const std::string& subdir = {}) {
  fs::path rel(stored);
  if (rel.is_absolute()) rel = rel.filename();
  fs::path base = subdir.empty() ? out_dir : out_dir / subdir;
  return base / rel.lexically_normal();
}

int report_failures(const std::vector<std::string>& failures, std::string_view what) {
  if (failures.empty()) return kExitOk;
  log()->error("{} file(s) failed during {}", failures.size(), what);
  for (std::size_t i = 0; i < failures.size() && i < 10; ++i) {
    log()->error("  {}", failures[i]);
  }
  return kExitInput;
}

void write_run_record(const fs::path& out_dir, ojson record) {
  write_text(out_dir / "run.json", record.dump(2) + "\n");
}

// ---------------------------------------------------------------- build-manifest

struct BuildManifestArgs {
  std::string pools;
  std::string root = ".";
  std::vector<std::string> uids;
  std::string uids_file;
  std::string rir_dir;
  std::size_t n = 10;
  std::uint64_t seed = 0;
  std::string out;
};

std::vector<std::string> collect_uids(const BuildManifestArgs& a) {
  std::vector<std::string> uids = a.uids;
  if (!a.uids_file.empty()) {
    std::ifstream in(a.uids_file);
    if (!in) throw IoError("cannot open " + a.uids_file);
    std::string line;
    while (std::getline(in, line)) {
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#') continue;
      const auto e = line.find_last_not_of(" \t\r");
      uids.push_back(line.substr(b, e - b + 1));
    }
  }
  if (!a.rir_dir.empty()) {
    std::vector<std::string> from_bank;
    for (const auto& d : fs::directory_iterator(a.rir_dir)) {
      if (d.is_directory()) from_bank.push_back(d.path().filename().string());
    }
    std::sort(from_bank.begin(), from_bank.end());
    uids.insert(uids.end(), from_bank.begin(), from_bank.end());
  }
  if (uids.empty()) throw InputError("no uids given (use --uids, --uids-file or --rir-dir)");
  return uids;
}

int cmd_build_manifest(const BuildManifestArgs& a, std::ostream& out) {
  const auto uids = collect_uids(a);
  const PoolSet pools = load_pools(a.pools, a.root);
  const Manifest m = build_manifest(pools.bona, pools.spoof, uids, a.n, a.seed);
  write_manifest_file(m, fs::path(a.out));
  const ValidationReport v = validate_manifest(m);
  std::size_t spoof = 0;
  for (const auto& [uid, c] : v.per_uid) spoof += c.spoof;
  out << m.entries.size() << " entries (" << spoof << " spoof, "
      << m.entries.size() - spoof << " bona fide) across " << uids.size()
      << " uids, " << kEntriesPerUidPerN * a.n << " per uid, seed " << a.seed << '\n';
  out << (v.valid() ? "balanced" : "UNBALANCED") << '\n';
  return v.valid() ? kExitOk : kExitInternal;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string manifest;
  std::string rir_dir;
  std::string root = ".";
  std::string out_dir;
  std::string out_manifest;
  std::uint64_t seed = 0;
  std::string noise_kind;
  double snr_lo = 15.0;
  double snr_hi = 40.0;
  std::string encoding = "float32";
};

int cmd_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out) {
  Manifest m = read_manifest(fs::path(a.manifest));
  const RirBankLoad bank = load_rir_bank(a.rir_dir);
  for (const auto& w : bank.warnings) log()->warn("skipped RIR {}", w);
  const WavEncoding encoding = parse_encoding(a.encoding);
  std::optional<NoiseKind> kind;
  if (!a.noise_kind.empty()) {
    kind = parse_noise_kind(a.noise_kind);
    NoiseSpec{*kind, 0, a.snr_lo, a.snr_hi}.validate();
  }
  const fs::path out_dir(a.out_dir);

  struct Job {
    std::string input;
    std::string uid;
    fs::path output;
    std::vector<std::size_t> entries;
    ojson meta;
    std::optional<std::string> error;
  };
  std::vector<Job> jobs;
  std::map<fs::path, std::size_t> by_output;
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& e = m.entries[i];
    if (!bank.bank.contains(e.uid)) {
      failures.push_back(e.original_file + ": no RIR for uid '" + e.uid + "'");
      continue;
    }
    const fs::path output = output_path(out_dir, e.original_file, e.uid);
    auto [it, inserted] = by_output.try_emplace(output, jobs.size());
    if (inserted) jobs.push_back({e.original_file, e.uid, output, {}, {}, std::nullopt});
    jobs[it->second].entries.push_back(i);
  }

  parallel_for(jobs.size(), g.workers, [&](std::size_t j) {
    Job& job = jobs[j];
    try {
      const AudioBuffer input = read_wav(resolve(a.root, job.input));
      const Rir rir = rir_at_rate(bank.bank.at(job.uid), input.sample_rate);
      const std::uint64_t seed = derive_seed(a.seed, {"simulate", job.uid, job.input});
      std::optional<NoiseSpec> floor;
      if (kind) floor = NoiseSpec{*kind, seed, a.snr_lo, a.snr_hi};
      const ReplayResult r = simulate_replay_detailed(input, rir, floor);
      fs::create_directories(job.output.parent_path());
      write_wav(job.output, r.audio, encoding);
      const std::string output = relativize(job.output, a.root);
      job.meta = {{"input", job.input},
                  {"output", output},
                  {"uid", job.uid},
                  {"rir", relativize(bank.bank.source_dir() / job.uid / "RIR.wav", a.root)},
                  {"rir_samples", rir.impulse.size()},
                  {"sample_rate", input.sample_rate},
                  {"seed", seed},
                  {"post_scale", r.post_scale}};
      if (r.mix) {
        const auto mix = mix_record(job.input, output, *kind, *r.mix);
        job.meta["noise"] = {{"kind", mix["kind"]},
                             {"drawn_snr_db", mix["drawn_snr_db"]},
                             {"achieved_snr_db", mix["achieved_snr_db"]},
                             {"gain", mix["gain"]},
                             {"post_scale", mix["post_scale"]}};
      } else {
        job.meta["noise"] = nullptr;
      }
    } catch (const std::exception& ex) {
      job.error = ex.what();
    }
  });

  std::vector<ojson> meta;
  for (const auto& job : jobs) {
    if (job.error) {
      failures.push_back(job.input + ": " + *job.error);
      continue;
    }
    const Rir& rir = bank.bank.at(job.uid);
    for (std::size_t i : job.entries) {
      auto& e = m.entries[i];
      e.recorded_file = job.meta["output"].get<std::string>();
      if (e.mic.empty()) e.mic = rir.mic;
      if (e.speaker.empty()) e.speaker = rir.speaker;
    }
    meta.push_back(job.meta);
  }
  fs::create_directories(out_dir);
  const fs::path manifest_out =
      a.out_manifest.empty() ? out_dir / "manifest.jsonl" : fs::path(a.out_manifest);
  write_manifest_file(m, manifest_out);
  write_jsonl(out_dir / "metadata.jsonl", meta);
  write_run_record(out_dir, {{"command", "simulate"},
                             {"seed", a.seed},
                             {"manifest", a.manifest},
                             {"rir_dir", a.rir_dir},
                             {"noise_kind", a.noise_kind.empty() ? ojson(nullptr) : ojson(a.noise_kind)},
                             {"snr_range_db", {a.snr_lo, a.snr_hi}},
                             {"encoding", a.encoding}});
  out << meta.size() << " files written to " << out_dir.string() << ", "
      << failures.size() << " failed, seed " << a.seed << '\n';
  return report_failures(failures, "simulation");
}

// ---------------------------------------------------------------- mix-noise

struct MixNoiseArgs {
  std::string manifest;
  std::string root = ".";
  std::string out_dir;
  std::string out_manifest;
  std::string kind;
  double snr_lo = 15.0;
  double snr_hi = 40.0;
  std::uint64_t seed = 0;
  std::string encoding = "float32";
};

int cmd_mix_noise(const MixNoiseArgs& a, const Globals& g, std::ostream& out) {
  Manifest m = read_manifest(fs::path(a.manifest));
  const NoiseKind kind = parse_noise_kind(a.kind);
  NoiseSpec{kind, 0, a.snr_lo, a.snr_hi}.validate();
  const WavEncoding encoding = parse_encoding(a.encoding);
  const fs::path out_dir(a.out_dir);

  struct Job {
    std::string input;
    fs::path output;
    std::vector<std::size_t> entries;
    std::optional<MixResult> result;
    std::optional<std::string> error;
    bool silent = false;
  };
  std::vector<Job> jobs;
  std::map<std::string, std::size_t> by_input;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& e = m.entries[i];
    auto [it, inserted] = by_input.try_emplace(e.original_file, jobs.size());
    if (inserted) jobs.push_back({e.original_file, output_path(out_dir, e.original_file), {}, {}, {}, false});
    jobs[it->second].entries.push_back(i);
  }

  parallel_for(jobs.size(), g.workers, [&](std::size_t j) {
    Job& job = jobs[j];
    try {
      const AudioBuffer input = read_wav(resolve(a.root, job.input));
      if (input.empty() || rms_power(input) == 0.0) {
        job.silent = true;
        return;
      }
      const NoiseSpec spec{kind, derive_seed(a.seed, {"mix-noise", job.input}),
                           a.snr_lo, a.snr_hi};
      job.result = mix_at_snr(input, spec);
      fs::create_directories(job.output.parent_path());
      write_wav(job.output, job.result->mixture, encoding);
    } catch (const std::exception& ex) {
      job.error = ex.what();
    }
  });

  std::vector<ojson> meta;
  std::vector<std::string> failures;
  std::size_t silent = 0;
  for (const auto& job : jobs) {
    if (job.silent) {
      ++silent;
      log()->warn("skipped silent file {}", job.input);
      continue;
    }
    if (job.error) {
      failures.push_back(job.input + ": " + *job.error);
      continue;
    }
    const std::string output = relativize(job.output, a.root);
    meta.push_back(mix_record(job.input, output, kind, *job.result));
    for (std::size_t i : job.entries) {
      auto& e = m.entries[i];
      e.recorded_file = output;
      e.extra["noise_kind"] = std::string(to_string(kind));
      e.extra["drawn_snr_db"] = job.result->drawn_snr_db;
      e.extra["achieved_snr_db"] = job.result->achieved_snr_db;
    }
  }
  fs::create_directories(out_dir);
  write_manifest_file(m, a.out_manifest.empty() ? out_dir / "manifest.jsonl"
                                                : fs::path(a.out_manifest));
  write_jsonl(out_dir / "metadata.jsonl", meta);
  write_run_record(out_dir, {{"command", "mix-noise"},
                             {"seed", a.seed},
                             {"manifest", a.manifest},
                             {"kind", a.kind},
                             {"snr_range_db", {a.snr_lo, a.snr_hi}},
                             {"encoding", a.encoding}});
  out << meta.size() << " noisy files written to " << out_dir.string() << ", "
      << silent << " silent skipped, " << failures.size() << " failed, seed "
      << a.seed << '\n';
  return report_failures(failures, "noise mixing");
}

// ---------------------------------------------------------------- augment

struct AugmentArgs {
  std::string manifest;
  std::string rir_dir;
  std::string root = ".";
  std::string out_dir;
  std::string out_manifest;
  double probability = 0.5;
  std::uint64_t seed = 0;
  std::string encoding = "float32";
};

int cmd_augment(const AugmentArgs& a, const Globals& g, std::ostream& out) {
  const Manifest m = read_manifest(fs::path(a.manifest));
  const RirBankLoad bank = load_rir_bank(a.rir_dir);
  for (const auto& w : bank.warnings) log()->warn("skipped RIR {}", w);
  AugmentOptions opt;
  opt.probability = a.probability;
  opt.seed = a.seed;
  opt.root = a.root;
  opt.out_dir = a.out_dir;
  opt.encoding = parse_encoding(a.encoding);
  opt.workers = g.workers;
  const AugmentResult r = augment_manifest(m, bank.bank, opt);
  const fs::path manifest_out = a.out_manifest.empty()
                                    ? fs::path(a.out_dir) / "manifest.jsonl"
                                    : fs::path(a.out_manifest);
  write_manifest_file(r.manifest, manifest_out);
  write_run_record(a.out_dir, {{"command", "augment"},
                               {"seed", a.seed},
                               {"manifest", a.manifest},
                               {"rir_dir", a.rir_dir},
                               {"probability", a.probability},
                               {"encoding", a.encoding}});
  std::vector<std::string> failures;
  for (const auto& e : r.errors) failures.push_back(e.file + ": " + e.message);
  out << r.augmented << " of " << m.entries.size() << " entries augmented (p="
      << a.probability << ", seed " << a.seed << "), " << failures.size()
      << " failed\n";
  return report_failures(failures, "augmentation");
}

// ---------------------------------------------------------------- baseline detector

struct FeatureArgs {
  int sample_rate = 16000;
  std::size_t bands = 40;
  std::size_t frame_size = 512;
  std::size_t hop_size = 256;

  FeatureConfig config() const { return {sample_rate, frame_size, hop_size, bands}; }
};

FeatureVector features_for_file(const fs::path& path, const FeatureConfig& config) {
  AudioBuffer audio = read_wav(path);
  if (audio.sample_rate != config.sample_rate) audio = resample(audio, config.sample_rate);
  return extract_features(audio, config);
}

enum class Source { kOriginal, kRecorded, kAuto, kBoth };

Source parse_source(const std::string& s) {
  if (s == "original") return Source::kOriginal;
  if (s == "recorded") return Source::kRecorded;
  if (s == "auto") return Source::kAuto;
  if (s == "both") return Source::kBoth;
  throw InputError("unknown source '" + s + "' (original, recorded, auto or both)");
}

// Unique (file, label) pairs in manifest order.
std::vector<std::pair<std::string, Label>> select_files(const Manifest& m, Source source) {
  std::vector<std::pair<std::string, Label>> files;
  std::set<std::string> seen;
  auto add = [&](const std::string& f, Label l) {
    if (!f.empty() && seen.insert(f).second) files.emplace_back(f, l);
  };
  for (const auto& e : m.entries) {
    switch (source) {
      case Source::kOriginal: add(e.original_file, e.label); break;
      case Source::kRecorded: add(e.recorded_file, e.label); break;
      case Source::kAuto:
        add(e.recorded_file.empty() ? e.original_file : e.recorded_file, e.label);
        break;
      case Source::kBoth:
        add(e.original_file, e.label);
        add(e.recorded_file, e.label);
        break;
    }
  }
  return files;
}

struct TrainArgs {
  std::string manifest;
  std::string root = ".";
  std::string out;
  std::string source = "auto";
  double learning_rate = 0.5;
  std::size_t epochs = 2000;
  std::uint64_t seed = 0;
  FeatureArgs features;
};

int cmd_train_baseline(const TrainArgs& a, const Globals& g, std::ostream& out) {
  const Manifest m = read_manifest(fs::path(a.manifest));
  const auto files = select_files(m, parse_source(a.source));
  if (files.empty()) throw InputError("manifest selects no files for training");
  const FeatureConfig fc = a.features.config();
  std::vector<FeatureVector> feats(files.size());
  std::vector<Label> labels(files.size());
  parallel_for(files.size(), g.workers, [&](std::size_t i) {
    feats[i] = features_for_file(resolve(a.root, files[i].first), fc);
    labels[i] = files[i].second;
  });
  TrainConfig tc;
  tc.learning_rate = a.learning_rate;
  tc.epochs = a.epochs;
  tc.seed = a.seed;
  const TrainResult r = train_detector(feats, labels, tc, fc);

  std::vector<ScoreRecord> train_scores;
  for (std::size_t i = 0; i < feats.size(); ++i) {
    train_scores.push_back({files[i].first, score(r.model, feats[i]), labels[i]});
  }
  const double accuracy = accuracy_at_threshold(train_scores);
  ojson j = to_json(r.model);
  j["training"] = {{"learning_rate", a.learning_rate},
                   {"epochs", a.epochs},
                   {"epochs_run", r.loss_history.size() - 1},
                   {"seed", a.seed},
                   {"final_loss", r.loss_history.back()},
                   {"examples", feats.size()}};
  write_text(a.out, j.dump(2) + "\n");
  out << "trained on " << feats.size() << " files, " << r.loss_history.size() - 1
      << " epochs, final loss " << r.loss_history.back() << ", training accuracy "
      << accuracy << ", seed " << a.seed << '\n';
  return kExitOk;
}

struct ScoreArgs {
  std::string model;
  std::string manifest;
  std::string root = ".";
  std::string out;
  std::string source = "both";
};

int cmd_score_baseline(const ScoreArgs& a, const Globals& g, std::ostream& out) {
  const DetectorModel model = load_model(a.model);
  const Manifest m = read_manifest(fs::path(a.manifest));
  const auto files = select_files(m, parse_source(a.source));
  std::vector<ScoreRecord> records(files.size());
  std::vector<std::optional<std::string>> errors(files.size());
  parallel_for(files.size(), g.workers, [&](std::size_t i) {
    try {
      const auto f = features_for_file(resolve(a.root, files[i].first), model.feature_config);
      records[i] = {files[i].first, score(model, f), files[i].second};
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });
  std::vector<ScoreRecord> ok;
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (errors[i]) failures.push_back(files[i].first + ": " + *errors[i]);
    else ok.push_back(records[i]);
  }
  const fs::path out_path(a.out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_scores(out_path, ok);
  out << ok.size() << " files scored, " << failures.size() << " failed\n";
  return report_failures(failures, "scoring");
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::vector<std::string> scores;
  std::string manifest;
  double threshold = 0.5;
  std::string out;
  std::string table;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const Manifest m = read_manifest(fs::path(a.manifest));
  std::vector<std::vector<ScoreRecord>> trials;
  for (const auto& s : a.scores) trials.push_back(read_scores(s));
  EvalReport report;
  try {
    report = evaluate(trials, m, a.threshold);
  } catch (const UnjoinableError& e) {
    log()->error("{} score record(s) do not join to the manifest; first ones:",
                 e.ids().size());
    for (std::size_t i = 0; i < e.ids().size() && i < 10; ++i) {
      log()->error("  {}", e.ids()[i]);
    }
    return kExitInput;
  }
  write_text(a.out, to_json(report).dump(2) + "\n");
  const std::string table = render_table(report);
  write_text(a.table.empty() ? fs::path(a.out).replace_extension(".txt") : fs::path(a.table),
             table);
  out << table;
  return kExitOk;
}

// ---------------------------------------------------------------- correlate

struct CorrelateArgs {
  std::string report;
  std::string mos;
  std::string pesq;
  std::string ratings;
  std::size_t min_listeners = 4;
  std::string out_dir;
};

int cmd_correlate(const CorrelateArgs& a, std::ostream& out) {
  std::ifstream in(a.report);
  if (!in) throw IoError("cannot open " + a.report);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(a.report + ": " + e.what());
  }
  EvalReport report = report_from_json(doc);

  std::map<std::string, double> mos, pesq;
  if (!a.mos.empty()) {
    if (fs::exists(a.mos)) mos = read_quality(a.mos, QualityMeasure::kMos);
    else log()->warn("MOS file {} not found; MOS correlations absent", a.mos);
  }
  if (!a.ratings.empty()) {
    for (const auto& [uid, avg] : average_listener_scores(a.ratings)) {
      if (avg.listeners < a.min_listeners) {
        log()->warn("uid {} has ratings from only {} listener(s)", uid, avg.listeners);
      }
      mos[uid] = avg.mos;
    }
  }
  if (!a.pesq.empty()) {
    if (fs::exists(a.pesq)) pesq = read_quality(a.pesq, QualityMeasure::kPesq);
    else log()->warn("PESQ file {} not found; PESQ correlations absent", a.pesq);
  }
  for (auto& s : report.per_setup) {
    if (auto it = mos.find(s.uid); it != mos.end()) s.mos = it->second;
    if (auto it = pesq.find(s.uid); it != pesq.end()) s.pesq = it->second;
  }
  const CorrelationTriple c = quality_correlation(report.per_setup);
  report.correlations = c;

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  ojson j;
  j["correlations"] = to_json(c);
  j["per_setup"] = to_json(report)["per_setup"];
  write_text(dir / "correlations.json", j.dump(2) + "\n");
  const auto points = scatter_points(report.per_setup);
  write_text(dir / "scatter.csv", render_scatter_csv(points));
  write_text(dir / "scatter.svg", render_scatter_svg(points, c));

  auto describe = [&](const char* name, const Correlation& corr) {
    out << name << ": ";
    if (corr.r) out << *corr.r;
    else out << "absent";
    out << " (" << corr.pairs << " pairs)";
    if (!corr.note.empty()) out << " " << corr.note;
    out << '\n';
    if (!corr.r) log()->warn("{} undefined: {}", name, corr.note);
  };
  describe("acc_vs_mos", c.acc_vs_mos);
  describe("acc_vs_pesq", c.acc_vs_pesq);
  describe("mos_vs_pesq", c.mos_vs_pesq);
  return kExitOk;
}

// ---------------------------------------------------------------- quality

struct QualityArgs {
  std::string manifest;
  std::string root = ".";
  std::string out;
};

int cmd_quality(const QualityArgs& a, const Globals& g, std::ostream& out) {
  const Manifest m = read_manifest(fs::path(a.manifest));
  struct Pair {
    std::string original, recorded, uid;
    double segsnr = 0.0, lsd = 0.0;
    std::optional<std::string> error;
  };
  std::vector<Pair> pairs;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& e : m.entries) {
    if (e.recorded_file.empty()) continue;
    if (seen.insert({e.original_file, e.recorded_file}).second) {
      pairs.push_back({e.original_file, e.recorded_file, e.uid, 0.0, 0.0, std::nullopt});
    }
  }
  parallel_for(pairs.size(), g.workers, [&](std::size_t i) {
    Pair& p = pairs[i];
    try {
      AudioBuffer ref = read_wav(resolve(a.root, p.original));
      AudioBuffer deg = read_wav(resolve(a.root, p.recorded));
      if (deg.sample_rate != ref.sample_rate) deg = resample(deg, ref.sample_rate);
      const std::size_t n = std::min(ref.size(), deg.size());
      ref.samples.resize(n);
      deg.samples.resize(n);
      p.segsnr = segmental_snr(ref, deg);
      p.lsd = log_spectral_distance(ref, deg);
    } catch (const std::exception& ex) {
      p.error = ex.what();
    }
  });
  struct Acc {
    double segsnr = 0.0, lsd = 0.0;
    std::size_t n = 0;
  };
  std::map<std::string, Acc> per_uid;
  std::vector<std::string> failures;
  for (const auto& p : pairs) {
    if (p.error) {
      failures.push_back(p.recorded + ": " + *p.error);
      continue;
    }
    auto& acc = per_uid[p.uid];
    acc.segsnr += p.segsnr;
    acc.lsd += p.lsd;
    ++acc.n;
  }
  std::ostringstream csv_out;
  csv_out.precision(17);
  csv_out << "uid,segmental_snr_db,log_spectral_distance_db,files\n";
  for (const auto& [uid, acc] : per_uid) {
    csv_out << uid << ',' << acc.segsnr / static_cast<double>(acc.n) << ','
            << acc.lsd / static_cast<double>(acc.n) << ',' << acc.n << '\n';
  }
  write_text(a.out, csv_out.str());
  out << per_uid.size() << " setups, " << pairs.size() - failures.size()
      << " file pairs measured, " << failures.size() << " failed\n";
  return report_failures(failures, "quality measurement");
}

// ---------------------------------------------------------------- mos-average

struct MosAverageArgs {
  std::string ratings;
  std::string out;
  std::size_t min_listeners = 4;
};

int cmd_mos_average(const MosAverageArgs& a, std::ostream& out) {
  const auto averages = average_listener_scores(a.ratings);
  std::ostringstream text;
  text.precision(17);
  text << "uid,mos\n";
  std::size_t thin = 0;
  for (const auto& [uid, avg] : averages) {
    text << uid << ',' << avg.mos << '\n';
    if (avg.listeners < a.min_listeners) {
      ++thin;
      log()->warn("uid {} has ratings from only {} listener(s)", uid, avg.listeners);
    }
  }
  write_text(a.out, text.str());
  out << averages.size() << " uids averaged, " << thin << " below "
      << a.min_listeners << " listeners\n";
  return kExitOk;
}

std::string find_section(const std::vector<std::string>& args,
                         const std::set<std::string>& names) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (names.contains(args[i])) return args[i];
  }
  return {};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Replay-attack simulation and deepfake-detector robustness evaluation"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--workers", g.workers, "File-level worker threads")
      ->envname("REPLAYDF_WORKERS")
      ->check(CLI::Range(1u, 1024u));
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off")
      ->envname("REPLAYDF_LOG_LEVEL");
  app.set_config("--config", "", "JSON config file mirroring the flags");

  BuildManifestArgs bm;
  auto* build = app.add_subcommand("build-manifest", "Balanced selection from audio pools");
  build->add_option("--pools", bm.pools, "Pool definition JSON")->required();
  build->add_option("--root", bm.root, "Root that stored paths are relative to");
  build->add_option("--uids", bm.uids, "Setup uids")->delimiter(',');
  build->add_option("--uids-file", bm.uids_file, "File with one uid per line");
  build->add_option("--rir-dir", bm.rir_dir, "Take uids from an RIR bank's folders");
  build->add_option("-n,--n-per-cell", bm.n, "Files per (language, architecture) cell");
  build->add_option("--seed", bm.seed);
  build->add_option("--out", bm.out, "Output manifest (JSONL)")->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Convolve manifest audio with setup RIRs");
  simulate->add_option("--manifest", sim.manifest)->required();
  simulate->add_option("--rir-dir", sim.rir_dir)->required();
  simulate->add_option("--root", sim.root);
  simulate->add_option("--out-dir", sim.out_dir)->required();
  simulate->add_option("--out-manifest", sim.out_manifest);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--noise-kind", sim.noise_kind, "Optional noise floor: gaussian, white, pink");
  simulate->add_option("--snr-lo", sim.snr_lo);
  simulate->add_option("--snr-hi", sim.snr_hi);
  simulate->add_option("--encoding", sim.encoding, "float32 or pcm16");

  MixNoiseArgs mix;
  auto* mix_noise = app.add_subcommand("mix-noise", "Add synthetic noise at random SNRs");
  mix_noise->add_option("--manifest", mix.manifest)->required();
  mix_noise->add_option("--root", mix.root);
  mix_noise->add_option("--out-dir", mix.out_dir)->required();
  mix_noise->add_option("--out-manifest", mix.out_manifest);
  mix_noise->add_option("--kind", mix.kind, "gaussian, white or pink")->required();
  mix_noise->add_option("--snr-lo", mix.snr_lo);
  mix_noise->add_option("--snr-hi", mix.snr_hi);
  mix_noise->add_option("--seed", mix.seed);
  mix_noise->add_option("--encoding", mix.encoding);

  AugmentArgs aug;
  auto* augment = app.add_subcommand("augment", "RIR augmentation of a training manifest");
  augment->add_option("--manifest", aug.manifest)->required();
  augment->add_option("--rir-dir", aug.rir_dir)->required();
  augment->add_option("--root", aug.root);
  augment->add_option("--out-dir", aug.out_dir)->required();
  augment->add_option("--out-manifest", aug.out_manifest);
  augment->add_option("--probability", aug.probability)->check(CLI::Range(0.0, 1.0));
  augment->add_option("--seed", aug.seed);
  augment->add_option("--encoding", aug.encoding);

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train-baseline", "Train the logistic baseline detector");
  train_cmd->add_option("--manifest", tr.manifest)->required();
  train_cmd->add_option("--root", tr.root);
  train_cmd->add_option("--out", tr.out, "Model JSON")->required();
  train_cmd->add_option("--source", tr.source, "original, recorded or auto");
  train_cmd->add_option("--lr", tr.learning_rate);
  train_cmd->add_option("--epochs", tr.epochs);
  train_cmd->add_option("--seed", tr.seed);
  train_cmd->add_option("--sample-rate", tr.features.sample_rate);
  train_cmd->add_option("--bands", tr.features.bands);
  train_cmd->add_option("--frame-size", tr.features.frame_size);
  train_cmd->add_option("--hop-size", tr.features.hop_size);

  ScoreArgs sc;
  auto* score_cmd = app.add_subcommand("score-baseline", "Score manifest audio with a baseline model");
  score_cmd->add_option("--model", sc.model)->required();
  score_cmd->add_option("--manifest", sc.manifest)->required();
  score_cmd->add_option("--root", sc.root);
  score_cmd->add_option("--out", sc.out, "Score CSV")->required();
  score_cmd->add_option("--source", sc.source, "original, recorded, auto or both");

  EvaluateArgs ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "EER, accuracy and per-attack report");
  eval_cmd->add_option("--scores", ev.scores, "Score CSV; repeat for trials")->required();
  eval_cmd->add_option("--manifest", ev.manifest)->required();
  eval_cmd->add_option("--threshold", ev.threshold);
  eval_cmd->add_option("--out", ev.out, "Report JSON")->required();
  eval_cmd->add_option("--table", ev.table, "Rendered table (default: <out>.txt)");

  CorrelateArgs co;
  auto* corr_cmd = app.add_subcommand("correlate", "Quality vs per-setup accuracy correlations");
  corr_cmd->add_option("--report", co.report, "Report JSON from evaluate")->required();
  corr_cmd->add_option("--mos", co.mos, "CSV uid,mos");
  corr_cmd->add_option("--pesq", co.pesq, "CSV uid,pesq");
  corr_cmd->add_option("--ratings", co.ratings, "Raw listener CSV uid,listener,score");
  corr_cmd->add_option("--min-listeners", co.min_listeners);
  corr_cmd->add_option("--out-dir", co.out_dir)->required();

  QualityArgs qa;
  auto* quality_cmd = app.add_subcommand("quality", "Segmental SNR and log-spectral distance per setup");
  quality_cmd->add_option("--manifest", qa.manifest)->required();
  quality_cmd->add_option("--root", qa.root);
  quality_cmd->add_option("--out", qa.out, "CSV output")->required();

  MosAverageArgs ma;
  auto* mos_cmd = app.add_subcommand("mos-average", "Average raw listener ratings per uid");
  mos_cmd->add_option("--ratings", ma.ratings)->required();
  mos_cmd->add_option("--out", ma.out)->required();
  mos_cmd->add_option("--min-listeners", ma.min_listeners);

  std::set<std::string> names;
  for (const auto* sub : app.get_subcommands({})) names.insert(sub->get_name());
  app.config_formatter(std::make_shared<JsonConfig>(
      find_section(args, names), std::set<std::string>{"workers", "log-level"}));

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, std::cerr);
    return code == 0 ? kExitOk : kExitInput;
  }

  log()->set_level(spdlog::level::from_str(g.log_level));
  try {
    if (*build) return cmd_build_manifest(bm, out);
    if (*simulate) return cmd_simulate(sim, g, out);
    if (*mix_noise) return cmd_mix_noise(mix, g, out);
    if (*augment) return cmd_augment(aug, g, out);
    if (*train_cmd) return cmd_train_baseline(tr, g, out);
    if (*score_cmd) return cmd_score_baseline(sc, g, out);
    if (*eval_cmd) return cmd_evaluate(ev, out);
    if (*corr_cmd) return cmd_correlate(co, out);
    if (*quality_cmd) return cmd_quality(qa, g, out);
    if (*mos_cmd) return cmd_mos_average(ma, out);
  } catch (const InputError& e) {
    log()->error("{}", e.what());
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    log()->error("{}", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    log()->error("internal error: {}", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace replaydf::cli

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


// Acceptance checks. Each criterion prints one PASS/FAIL line with its
// measured values; the exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "acceptance/synthetic_corpus.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "replaydf/cli.hpp"
#include "replaydf/detector.hpp"
#include "replaydf/manifest.hpp"
#include "replaydf/metrics.hpp"
#include "replaydf/noise.hpp"
#include "replaydf/replay.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace replaydf;
using replaydf::testing::TempDir;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// ---------------------------------------------------------------- 1

Verdict eer_oracle() {
  std::mt19937_64 gen(101);
  double worst = 0.0;
  for (int set = 0; set < 100; ++set) {
    std::uniform_int_distribution<std::size_t> count(20, 500);
    const std::size_t ns = count(gen), nb = count(gen);
    std::vector<double> spoof, bona;
    // Coarse grids produce ties on some sets.
    const bool tied = set % 4 == 0;
    auto draw = [&](double mean) {
      std::normal_distribution<double> nd(mean, 1.0);
      const double v = nd(gen);
      return tied ? std::round(v * 4.0) / 4.0 : v;
    };
    for (std::size_t i = 0; i < ns; ++i) spoof.push_back(draw(1.0));
    for (std::size_t i = 0; i < nb; ++i) bona.push_back(draw(0.0));
    const EerResult r = compute_eer(spoof, bona);
    const oracle::Eer o = oracle::eer(spoof, bona);
    worst = std::max({worst, std::abs(r.eer - o.eer), std::abs(r.threshold - o.threshold)});
  }
  const double perfect = compute_eer(std::vector<double>{0.9, 0.8, 0.7},
                                     std::vector<double>{0.1, 0.2}).eer;
  const double anti = compute_eer(std::vector<double>{0.1, 0.2},
                                  std::vector<double>{0.9, 0.8, 0.7}).eer;
  return {worst <= 1e-9 && perfect == 0.0 && anti == 1.0,
          fmt("max deviation %.3g over 100 sets, perfect %.1f, anti-perfect %.1f", worst,
              perfect, anti)};
}

// ---------------------------------------------------------------- 2

Verdict convolution_oracle() {
  std::mt19937_64 gen(202);
  double worst = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    const std::size_t n = 1 + gen() % 512, m = 1 + gen() % 128;
    const auto x = oracle::random_vector(gen, n);
    const auto h = oracle::random_vector(gen, m);
    const auto fast = convolve_full(x, h, ConvolutionMethod::kFft);
    const auto ref = oracle::convolve(x, h);
    double diff = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) diff = std::max(diff, std::abs(fast[i] - ref[i]));
    worst = std::max(worst, diff / oracle::max_abs(ref));
  }
  bool identity = true;
  for (std::size_t n : {1u, 511u, 4096u, 1u << 17}) {
    const AudioBuffer x(oracle::random_vector(gen, n), 16000);
    identity = identity && convolve(x, Rir{AudioBuffer({1.0}, 16000), "delta", {}, {}}) == x;
  }
  return {worst <= 1e-9 && identity,
          fmt("max relative error %.3g over 50 pairs, delta identity %s", worst,
              identity ? "exact" : "NOT exact")};
}

// ---------------------------------------------------------------- 3

Verdict snr_fidelity() {
  Rng voice_rng(303);
  const AudioBuffer signal = testing::make_utterance(voice_rng, {});
  double worst = 0.0;
  int runs = 0;
  for (NoiseKind kind : {NoiseKind::kGaussian, NoiseKind::kWhite, NoiseKind::kPink}) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      for (double target : {15.0, 20.0, 30.0, 40.0}) {
        const MixResult r = mix_at_snr(signal, NoiseSpec::fixed(kind, seed, target));
        // Undo any clip protection, then split the mixture back into parts.
        std::vector<double> noise(signal.size());
        for (std::size_t i = 0; i < noise.size(); ++i) {
          noise[i] = r.mixture.samples[i] / r.post_scale - signal.samples[i];
        }
        const double measured = 10.0 * std::log10(oracle::mean_square(signal.samples) /
                                                  oracle::mean_square(noise));
        worst = std::max(worst, std::abs(measured - target));
        ++runs;
      }
    }
  }
  return {worst <= 0.1, fmt("%d mixtures, max |SNR - target| %.3g dB", runs, worst)};
}

// ---------------------------------------------------------------- 4

Verdict pink_slope() {
  const AudioBuffer p = generate_noise(NoiseKind::kPink, 1u << 20, 16000, 404);
  const double slope = oracle::periodogram_slope(p.samples, 16000, 8192, 50.0, 6000.0);
  return {std::abs(slope + 1.0) <= 0.15, fmt("slope %.4f (50 Hz to 6 kHz)", slope)};
}

// ---------------------------------------------------------------- 5

Verdict manifest_arithmetic() {
  AudioPool bona(Label::kBonaFide), spoof(Label::kSpoof);
  for (Language l : kLanguages) {
    for (int i = 0; i < 40; ++i) bona.add(l, std::nullopt, "b" + std::to_string(i));
    for (Architecture a : kArchitectures) {
      for (int i = 0; i < 10; ++i) spoof.add(l, a, "s" + std::to_string(i));
    }
  }
  std::vector<std::string> uids;
  for (int i = 0; i < 109; ++i) uids.push_back("uid" + std::to_string(i));
  const Manifest big = build_manifest(bona, spoof, uids, 10, 505);
  const ValidationReport v = validate_manifest(big);
  bool per_uid_ok = v.per_uid.size() == 109;
  for (const auto& [uid, c] : v.per_uid) {
    per_uid_ok = per_uid_ok && c.spoof == 240 && c.bona_fide == 240;
  }
  const Manifest small = build_manifest(bona, spoof, {"one"}, 1, 505);
  const bool ok = big.entries.size() == 52320 && per_uid_ok && v.valid() &&
                  small.entries.size() == 48;
  return {ok, fmt("109 uids x n=10: %zu entries, 240/240 per uid %s; 1 uid x n=1: %zu",
                  big.entries.size(), per_uid_ok ? "yes" : "no", small.entries.size())};
}

// ---------------------------------------------------------------- 6

Verdict pearson_oracle() {
  std::mt19937_64 gen(606);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + gen() % 300;
    const auto a = oracle::random_vector(gen, n, -10.0, 10.0);
    const auto b = oracle::random_vector(gen, n, 0.0, 5.0);
    worst = std::max(worst, std::abs(pearson(a, b) - oracle::pearson(a, b)));
  }
  // Negation flips the sign bit for bit. Affine maps are exact in exact
  // arithmetic; with dyadic data and power-of-two scales every intermediate
  // is representable, so the floating-point result is identical too.
  bool negation = true, affine_exact = true;
  double affine_general = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_vector(gen, 64);
    const auto b = oracle::random_vector(gen, 64);
    std::vector<double> neg(a);
    for (double& v : neg) v = -v;
    const double r = pearson(a, b);
    negation = negation && pearson(neg, b) == -r && pearson(b, neg) == -r;

    std::vector<double> ia(64), ib(64), mapped(64), general(64);
    for (std::size_t i = 0; i < 64; ++i) {
      ia[i] = static_cast<double>(static_cast<int>(gen() % 201) - 100);
      ib[i] = static_cast<double>(static_cast<int>(gen() % 201) - 100);
      mapped[i] = 4.0 * ia[i] + 37.0;
      general[i] = 3.7 * a[i] + 12.5;
    }
    affine_exact = affine_exact && pearson(mapped, ib) == pearson(ia, ib);
    affine_general = std::max(affine_general, std::abs(pearson(general, b) - r));
  }
  const bool ok = worst <= 1e-9 && negation && affine_exact && affine_general <= 1e-12;
  return {ok, fmt("max oracle deviation %.3g; negation %s; dyadic affine %s; general affine "
                  "deviation %.3g",
                  worst, negation ? "exact" : "inexact", affine_exact ? "exact" : "inexact",
                  affine_general)};
}

// ---------------------------------------------------------------- 7

double nll(const std::vector<std::vector<double>>& x, const std::vector<double>& t,
           const std::vector<double>& w, double b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double z = b;
    for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * x[i][k];
    sum += std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - t[i] * z;
  }
  return sum / static_cast<double>(x.size());
}

Verdict gradient_check() {
  std::mt19937_64 gen(707);
  const std::size_t n = 64, d = 80;
  std::vector<std::vector<double>> x(n);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = oracle::random_vector(gen, d, -2.0, 2.0);
    t[i] = static_cast<double>(gen() % 2);
  }
  double worst = 0.0;
  for (int point = 0; point < 20; ++point) {
    auto w = oracle::random_vector(gen, d, -0.5, 0.5);
    const double b = oracle::random_vector(gen, 1, -1.0, 1.0)[0];
    std::vector<double> grad;
    logistic_loss(x, t, w, b, &grad);
    for (std::size_t k = 0; k <= d; ++k) {
      const double h = 1e-5;
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (k < d) {
        wp[k] += h;
        wm[k] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double fd = (nll(x, t, wp, bp) - nll(x, t, wm, bm)) / (2.0 * h);
      const double scale = std::max({std::abs(fd), std::abs(grad[k]), 1e-8});
      worst = std::max(worst, std::abs(fd - grad[k]) / scale);
    }
  }
  return {worst < 1e-4, fmt("max relative error %.3g over 20 points x %zu parameters", worst, d + 1)};
}

// ---------------------------------------------------------------- 8 and 9

struct Corpus {
  std::vector<std::string> files;  // root-relative
  std::vector<Label> labels;
};

Corpus write_corpus(const fs::path& root, const std::string& name, std::uint64_t seed,
                    int per_class) {
  const testing::CorpusConfig cfg;
  Rng rng(seed);
  Corpus c;
  fs::create_directories(root / name);
  for (int i = 0; i < 2 * per_class; ++i) {
    const bool spoof = i % 2 == 1;
    AudioBuffer a = testing::make_utterance(rng, cfg);
    if (spoof) a = testing::apply_artifact(a, rng, cfg);
    const std::string rel = name + "/" + (spoof ? "spoof_" : "bona_") + std::to_string(i) + ".wav";
    write_wav(root / rel, a, WavEncoding::kFloat32);
    c.files.push_back(rel);
    c.labels.push_back(spoof ? Label::kSpoof : Label::kBonaFide);
  }
  return c;
}

struct ClassAccuracy {
  double spoof = 0.0;
  double bona = 0.0;
};

ClassAccuracy class_accuracy(const DetectorModel& model, const std::vector<AudioBuffer>& audio,
                             const std::vector<Label>& labels) {
  double spoof = 0, bona = 0, ns = 0, nb = 0;
  for (std::size_t i = 0; i < audio.size(); ++i) {
    const bool said_spoof = score(model, extract_features(audio[i])) > 0.5;
    if (labels[i] == Label::kSpoof) {
      ns += 1;
      spoof += said_spoof ? 1 : 0;
    } else {
      nb += 1;
      bona += said_spoof ? 0 : 1;
    }
  }
  return {spoof / ns, bona / nb};
}

struct EndToEnd {
  ClassAccuracy clean, rir, noise, augmented_rir;
  std::size_t augmented = 0, train_files = 0, test_files = 0;
  double seconds = 0.0;
};

EndToEnd run_end_to_end() {
  const auto start = std::chrono::steady_clock::now();
  TempDir root("acceptance_e2e");
  const Corpus train = write_corpus(root.path(), "train", 801, 200);
  const Corpus test = write_corpus(root.path(), "test", 802, 200);

  // Ten augmentation setups on disk and five held-out test setups.
  Rng rir_rng(803);
  for (int i = 0; i < 10; ++i) {
    const Rir r = testing::make_rir(rir_rng, 16000, "train_setup" + std::to_string(i));
    fs::create_directories(root / "rirs" / r.uid);
    write_wav(root / "rirs" / r.uid / "RIR.wav", r.impulse, WavEncoding::kFloat32);
  }
  std::vector<Rir> held_out;
  for (int i = 0; i < 5; ++i) {
    held_out.push_back(testing::make_rir(rir_rng, 16000, "test_setup" + std::to_string(i)));
  }

  auto load = [&](const std::vector<std::string>& files) {
    std::vector<AudioBuffer> out;
    for (const auto& f : files) out.push_back(read_wav(root / f));
    return out;
  };
  auto features = [](const std::vector<AudioBuffer>& audio) {
    std::vector<FeatureVector> out;
    for (const auto& a : audio) out.push_back(extract_features(a));
    return out;
  };

  EndToEnd e;
  e.train_files = train.files.size();
  e.test_files = test.files.size();
  const TrainConfig tc;
  const DetectorModel clean_model = replaydf::train(features(load(train.files)), train.labels, tc);

  const auto test_audio = load(test.files);
  std::vector<AudioBuffer> replayed, noisy;
  for (std::size_t i = 0; i < test_audio.size(); ++i) {
    replayed.push_back(convolve(test_audio[i], held_out[i % held_out.size()]));
    noisy.push_back(mix_at_snr(test_audio[i],
                               NoiseSpec{NoiseKind::kGaussian, derive_seed(804, {test.files[i]}),
                                         15.0, 40.0})
                        .mixture);
  }
  e.clean = class_accuracy(clean_model, test_audio, test.labels);
  e.rir = class_accuracy(clean_model, replayed, test.labels);
  e.noise = class_accuracy(clean_model, noisy, test.labels);

  // Retrain on a manifest augmented with the disjoint training setups.
  Manifest m;
  for (std::size_t i = 0; i < train.files.size(); ++i) {
    ManifestEntry entry;
    entry.original_file = train.files[i];
    entry.label = train.labels[i];
    if (entry.label == Label::kSpoof) entry.architecture = Architecture::kBark;
    entry.uid = "studio";
    m.entries.push_back(entry);
  }
  AugmentOptions opt;
  opt.probability = 0.5;
  opt.seed = 805;
  opt.root = root.path();
  opt.out_dir = root / "augmented";
  const AugmentResult aug = augment_manifest(m, load_rir_bank(root / "rirs").bank, opt);
  e.augmented = aug.augmented;
  std::vector<std::string> aug_files;
  for (const auto& entry : aug.manifest.entries) {
    aug_files.push_back(entry.recorded_file.empty() ? entry.original_file : entry.recorded_file);
  }
  const DetectorModel aug_model = replaydf::train(features(load(aug_files)), train.labels, tc);
  e.augmented_rir = class_accuracy(aug_model, replayed, test.labels);
  e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return e;
}

Verdict directional(const EndToEnd& e) {
  const double spoof_drop = 100.0 * (e.clean.spoof - e.rir.spoof);
  const double bona_change = 100.0 * std::abs(e.clean.bona - e.rir.bona);
  const double recovered = spoof_drop > 0.0
                               ? 100.0 * (e.augmented_rir.spoof - e.rir.spoof) / spoof_drop * 100.0
                               : 0.0;
  const bool ok = spoof_drop >= 10.0 && bona_change < 5.0 && recovered >= 25.0 && e.seconds < 300.0;
  return {ok, fmt("%zu train / %zu test files; spoof acc clean %.1f%% -> replayed %.1f%% "
                  "(drop %.1f pts), bona %.1f%% -> %.1f%% (change %.1f pts); augmented "
                  "training (%zu of %zu files) gives spoof %.1f%%, bona %.1f%% on replayed, "
                  "recovering %.1f%% of the drop",
                  e.train_files, e.test_files, 100.0 * e.clean.spoof, 100.0 * e.rir.spoof,
                  spoof_drop, 100.0 * e.clean.bona, 100.0 * e.rir.bona, bona_change,
                  e.augmented, e.train_files, 100.0 * e.augmented_rir.spoof,
                  100.0 * e.augmented_rir.bona, recovered)};
}

Verdict noise_ablation(const EndToEnd& e) {
  const double noise_change = 100.0 * std::abs(e.noise.spoof - e.clean.spoof);
  const double rir_change = 100.0 * std::abs(e.rir.spoof - e.clean.spoof);
  return {noise_change < 5.0 && rir_change >= 10.0,
          fmt("spoof accuracy change: noise at 15-40 dB %.1f pts, replay convolution %.1f pts",
              noise_change, rir_change)};
}

// ---------------------------------------------------------------- 10

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), {"replaydf", "--log-level", "off"});
  std::ostringstream out;
  return cli::run(args, out);
}

std::map<std::string, std::vector<unsigned char>> snapshot(const fs::path& dir) {
  std::map<std::string, std::vector<unsigned char>> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).string()] = testing::read_bytes(e.path());
    }
  }
  return files;
}

std::string recorded_seed(const fs::path& run_json) {
  const auto j = nlohmann::json::parse(testing::read_text(run_json));
  return std::to_string(j.at("seed").get<std::uint64_t>());
}

Verdict determinism() {
  TempDir root("acceptance_determinism");
  const auto p = [&](const std::string& rel) { return (root / rel).string(); };
  const testing::CorpusConfig cfg{16000, 0.3};
  Rng rng(1001);
  nlohmann::json pools = nlohmann::json::array();
  for (Language l : kLanguages) {
    const std::string lang(to_string(l));
    for (Architecture a : kArchitectures) {
      const std::string dir = "spoof/" + lang + "/" + std::string(to_string(a));
      fs::create_directories(root / dir);
      for (int i = 0; i < 2; ++i) {
        const AudioBuffer u = testing::make_utterance(rng, cfg);
        write_wav(root / dir / (std::to_string(i) + ".wav"), testing::apply_artifact(u, rng, cfg),
                  WavEncoding::kFloat32);
      }
      pools.push_back({{"label", "spoof"}, {"language", lang},
                       {"architecture", std::string(to_string(a))}, {"globs", {dir + "/*.wav"}}});
    }
    const std::string dir = "bona/" + lang;
    fs::create_directories(root / dir);
    for (int i = 0; i < 3; ++i) {
      write_wav(root / dir / (std::to_string(i) + ".wav"), testing::make_utterance(rng, cfg),
                WavEncoding::kFloat32);
    }
    pools.push_back({{"label", "bona fide"}, {"language", lang}, {"globs", {dir + "/*.wav"}}});
  }
  testing::write_text(root / "pools.json", pools.dump());
  for (int i = 0; i < 3; ++i) {
    const Rir r = testing::make_rir(rng, 16000, "setup" + std::to_string(i));
    fs::create_directories(root / "rirs" / r.uid);
    write_wav(root / "rirs" / r.uid / "RIR.wav", r.impulse, WavEncoding::kFloat32);
  }

  // Each command runs once with a fresh seed, then again with the seed read
  // back from its own output; the outputs must not change by a single byte.
  struct Step {
    std::string name;
    fs::path output;
    std::function<std::vector<std::string>(const std::string& seed)> args;
    std::function<std::string()> seed_from_output;
  };
  const std::vector<Step> steps = {
      {"build-manifest", root / "manifest",
       [&](const std::string& seed) {
         return std::vector<std::string>{"build-manifest", "--pools", p("pools.json"), "--root",
                                         p(""), "--rir-dir", p("rirs"), "-n", "1", "--seed",
                                         seed, "--out", p("manifest/manifest.jsonl")};
       },
       [&] { return std::to_string(*read_manifest(root / "manifest" / "manifest.jsonl").seed); }},
      {"simulate", root / "sim",
       [&](const std::string& seed) {
         return std::vector<std::string>{"--workers", "2", "simulate", "--manifest", p("manifest/manifest.jsonl"),
                                         "--rir-dir", p("rirs"), "--root", p(""), "--out-dir",
                                         p("sim"), "--noise-kind", "pink", "--seed", seed};
       },
       [&] { return recorded_seed(root / "sim" / "run.json"); }},
      {"mix-noise", root / "noisy",
       [&](const std::string& seed) {
         return std::vector<std::string>{"mix-noise", "--manifest", p("manifest/manifest.jsonl"),
                                         "--root", p(""), "--out-dir", p("noisy"), "--kind",
                                         "white", "--seed", seed};
       },
       [&] { return recorded_seed(root / "noisy" / "run.json"); }},
      {"augment", root / "aug",
       [&](const std::string& seed) {
         return std::vector<std::string>{"augment", "--manifest", p("manifest/manifest.jsonl"),
                                         "--rir-dir", p("rirs"), "--root", p(""), "--out-dir",
                                         p("aug"), "--seed", seed};
       },
       [&] { return recorded_seed(root / "aug" / "run.json"); }},
      {"train-baseline", root / "model",
       [&](const std::string& seed) {
         return std::vector<std::string>{"train-baseline", "--manifest", p("aug/manifest.jsonl"),
                                         "--root", p(""), "--out", p("model/model.json"),
                                         "--epochs", "200", "--seed", seed};
       },
       [&] {
         const auto j = nlohmann::json::parse(testing::read_text(root / "model" / "model.json"));
         return std::to_string(j.at("training").at("seed").get<std::uint64_t>());
       }},
  };

  std::vector<std::string> failed;
  std::size_t files = 0;
  std::uint64_t fresh = 0x5eed;
  for (const auto& step : steps) {
    if (invoke(step.args(std::to_string(fresh++))) != 0) {
      failed.push_back(step.name + " (exit)");
      continue;
    }
    const auto first = snapshot(step.output);
    const std::string seed = step.seed_from_output();
    if (invoke(step.args(seed)) != 0 || snapshot(step.output) != first) {
      failed.push_back(step.name);
    }
    files += first.size();
  }
  std::string detail = fmt("%zu commands rerun from their recorded seeds, %zu output files compared",
                           steps.size(), files);
  for (const auto& f : failed) detail += "; differs: " + f;
  return {failed.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 EER oracle equivalence", eer_oracle},
      {"2 convolution oracle", convolution_oracle},
      {"3 SNR fidelity", snr_fidelity},
      {"4 pink-noise spectrum", pink_slope},
      {"5 manifest arithmetic", manifest_arithmetic},
      {"6 Pearson oracle", pearson_oracle},
      {"7 gradient check", gradient_check},
  };
  const std::map<std::string, double> limits = {{"1 EER oracle equivalence", 10.0},
                                                {"2 convolution oracle", 5.0},
                                                {"3 SNR fidelity", 30.0}};
  int failures = 0;
  auto report = [&](const std::string& name, Verdict v, double seconds) {
    if (const auto it = limits.find(name); it != limits.end() && seconds >= it->second) {
      v.pass = false;
      v.detail += fmt("; over the %.0f s limit", it->second);
    }
    std::printf("%s: %s (%.2f s) %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), seconds,
                v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  };
  auto timed = [&](const std::string& name, const std::function<Verdict()>& f) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = f();
    } catch (const std::exception& ex) {
      v = {false, std::string("threw: ") + ex.what()};
    }
    report(name, v, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  };

  for (const auto& [name, f] : criteria) timed(name, f);

  std::optional<EndToEnd> e2e;
  try {
    e2e = run_end_to_end();
  } catch (const std::exception& ex) {
    report("8 end-to-end directional replication", {false, std::string("threw: ") + ex.what()}, 0.0);
    report("9 noise-vs-convolution ablation", {false, "end-to-end run failed"}, 0.0);
  }
  if (e2e) {
    Verdict v = directional(*e2e);
    if (e2e->seconds >= 300.0) v.detail += "; over the 300 s limit";
    report("8 end-to-end directional replication", v, e2e->seconds);
    report("9 noise-vs-convolution ablation", noise_ablation(*e2e), 0.0);
  }
  timed("10 determinism", determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

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

#include "replaydf/replay.hpp"

#include <algorithm>
#include <fstream>

#include "replaydf/errors.hpp"
#include "replaydf/fft.hpp"
#include "replaydf/parallel.hpp"
#include "replaydf/paths.hpp"
#include "replaydf/random.hpp"

namespace replaydf {

RirBank::RirBank(std::map<std::string, Rir> entries,
                 std::filesystem::path source_dir)
    : entries_(std::move(entries)), source_dir_(std::move(source_dir)) {}

const Rir& RirBank::at(const std::string& uid) const {
  const auto it = entries_.find(uid);
  if (it == entries_.end()) throw InputError("no RIR for uid '" + uid + "'");
  return it->second;
}

std::vector<std::string> RirBank::uids() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [uid, rir] : entries_) out.push_back(uid);
  return out;
}

RirBankLoad load_rir_bank(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("RIR bank directory not found: " + dir.string());
  }
  std::vector<fs::path> folders;
  for (const auto& d : fs::directory_iterator(dir)) {
    if (d.is_directory()) folders.push_back(d.path());
  }
  std::sort(folders.begin(), folders.end());
  if (folders.empty()) throw InputError("RIR bank directory is empty: " + dir.string());

  RirBankLoad load;
  std::map<std::string, Rir> entries;
  for (const auto& folder : folders) {
    const std::string uid = folder.filename().string();
    Rir rir;
    rir.uid = uid;
    try {
      rir.impulse = read_wav(folder / "RIR.wav");
      if (rir.impulse.empty()) throw InputError("RIR.wav holds no samples");
      const fs::path meta = folder / "meta.json";
      if (fs::exists(meta)) {
        std::ifstream in(meta);
        const auto j = nlohmann::json::parse(in);
        rir.mic = j.value("mic", "");
        rir.speaker = j.value("speaker", "");
      }
    } catch (const std::exception& e) {
      load.warnings.push_back(uid + ": " + e.what());
      continue;
    }
    entries.emplace(uid, std::move(rir));
  }
  if (entries.empty()) {
    throw InputError("no readable RIR in " + dir.string());
  }
  load.bank = RirBank(std::move(entries), dir);
  return load;
}

std::vector<double> convolve_full(std::span<const double> signal,
                                  std::span<const double> kernel,
                                  ConvolutionMethod method) {
  if (signal.empty() || kernel.empty()) return {};
  const std::size_t n = signal.size();
  const std::size_t m = kernel.size();
  const std::size_t out_len = n + m - 1;
  std::vector<double> out(out_len, 0.0);
  const bool direct = method == ConvolutionMethod::kDirect ||
                      (method == ConvolutionMethod::kAuto &&
                       (n * m <= kDirectConvolutionLimit || std::min(n, m) <= kDirectShortOperand));
  if (direct) {
    for (std::size_t i = 0; i < n; ++i) {
      const double s = signal[i];
      for (std::size_t j = 0; j < m; ++j) out[i + j] += s * kernel[j];
    }
    return out;
  }
  const std::size_t size = fft::next_pow2(out_len);
  auto a = fft::real_spectrum(signal, size);
  const auto b = fft::real_spectrum(kernel, size);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] *= b[k];
  auto y = fft::inverse_real_spectrum(a, size);
  std::copy_n(y.begin(), out_len, out.begin());
  return out;
}

AudioBuffer convolve(const AudioBuffer& signal, const Rir& rir,
                     ConvolutionMethod method) {
  if (rir.impulse.empty()) throw InputError("RIR '" + rir.uid + "' is empty");
  if (rir.impulse.sample_rate != signal.sample_rate) {
    throw InputError("rate mismatch: signal " + std::to_string(signal.sample_rate) +
                     " Hz, RIR '" + rir.uid + "' " +
                     std::to_string(rir.impulse.sample_rate) + " Hz");
  }
  if (signal.empty()) return signal;

  // Trailing zeros do not change the truncated result; dropping them keeps
  // padded delta kernels on the exact direct path.
  std::span<const double> kernel(rir.impulse.samples);
  std::size_t m = kernel.size();
  while (m > 1 && kernel[m - 1] == 0.0) --m;
  kernel = kernel.first(m);

  auto full = convolve_full(signal.samples, kernel, method);
  full.resize(signal.size());
  AudioBuffer out(std::move(full), signal.sample_rate);

  const double original_peak = peak(signal.samples);
  const double new_peak = peak(out.samples);
  if (new_peak > 0.0 && original_peak > 0.0) {
    const double scale = original_peak / new_peak;
    for (double& s : out.samples) s *= scale;
  }
  return out;
}

ReplayResult simulate_replay_detailed(const AudioBuffer& signal, const Rir& rir,
                                      const std::optional<NoiseSpec>& noise_floor) {
  ReplayResult r;
  r.audio = convolve(signal, rir);
  if (noise_floor) {
    r.mix = mix_at_snr(r.audio, *noise_floor);
    r.audio = r.mix->mixture;
  }
  const double p = peak(r.audio.samples);
  if (p > 1.0) {
    r.post_scale = kClipPeak / p;
    for (double& s : r.audio.samples) s *= r.post_scale;
  }
  return r;
}

AudioBuffer simulate_replay(const AudioBuffer& signal, const Rir& rir,
                            const std::optional<NoiseSpec>& noise_floor) {
  return simulate_replay_detailed(signal, rir, noise_floor).audio;
}

Rir rir_at_rate(const Rir& rir, int rate) {
  if (rir.impulse.sample_rate == rate) return rir;
  Rir out = rir;
  out.impulse = resample(rir.impulse, rate);
  if (out.impulse.empty()) out.impulse.samples.push_back(0.0);
  return out;
}

AugmentResult augment_manifest(const Manifest& manifest, const RirBank& bank,
                               const AugmentOptions& options) {
  if (!(options.probability >= 0.0 && options.probability <= 1.0)) {
    throw InputError("augmentation probability must lie in [0, 1]");
  }
  AugmentResult result;
  result.manifest = manifest;
  if (bank.size() == 0) throw InputError("augment_manifest: empty RIR bank");
  const auto uids = bank.uids();

  struct Job {
    std::string input;
    std::string uid;
    std::filesystem::path output;
    std::vector<std::size_t> entries;
    std::optional<std::string> error;
  };
  std::vector<Job> jobs;
  std::map<std::filesystem::path, std::size_t> job_by_output;

  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    Rng rng(derive_seed(options.seed, {"augment", std::to_string(i), e.original_file}));
    if (!(rng.uniform() < options.probability)) continue;
    const std::string& uid = uids[rng.index(uids.size())];
    std::filesystem::path rel(e.original_file);
    if (rel.is_absolute()) rel = rel.filename();
    const auto output = options.out_dir / uid / rel;
    auto [it, inserted] = job_by_output.try_emplace(output, jobs.size());
    if (inserted) jobs.push_back({e.original_file, uid, output, {}, std::nullopt});
    jobs[it->second].entries.push_back(i);
  }

  parallel_for(jobs.size(), options.workers, [&](std::size_t j) {
    Job& job = jobs[j];
    try {
      const AudioBuffer input = read_wav(resolve(options.root, job.input));
      const Rir rir = rir_at_rate(bank.at(job.uid), input.sample_rate);
      const AudioBuffer replayed = simulate_replay(input, rir, std::nullopt);
      std::error_code ec;
      std::filesystem::create_directories(job.output.parent_path(), ec);
      write_wav(job.output, replayed, options.encoding);
    } catch (const std::exception& e) {
      job.error = e.what();
    }
  });

  for (const auto& job : jobs) {
    for (std::size_t i : job.entries) {
      if (job.error) {
        result.errors.push_back({i, job.input, *job.error});
        continue;
      }
      auto& e = result.manifest.entries[i];
      const Rir& rir = bank.at(job.uid);
      e.recorded_file = relativize(job.output, options.root);
      e.uid = job.uid;
      e.mic = rir.mic;
      e.speaker = rir.speaker;
      e.extra["augmented"] = true;
      ++result.augmented;
    }
  }
  std::sort(result.errors.begin(), result.errors.end(),
            [](const EntryError& a, const EntryError& b) { return a.index < b.index; });
  return result;
}

}  // namespace replaydf

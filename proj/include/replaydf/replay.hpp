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

#ifndef REPLAYDF_REPLAY_HPP_
#define REPLAYDF_REPLAY_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "replaydf/audio.hpp"
#include "replaydf/manifest.hpp"
#include "replaydf/noise.hpp"

namespace replaydf {

// Impulse response of one loudspeaker/microphone setup.
struct Rir {
  AudioBuffer impulse;
  std::string uid;
  std::string mic;
  std::string speaker;
};

class RirBank {
 public:
  RirBank() = default;
  RirBank(std::map<std::string, Rir> entries, std::filesystem::path source_dir);

  std::size_t size() const noexcept { return entries_.size(); }
  bool contains(const std::string& uid) const { return entries_.contains(uid); }
  const Rir& at(const std::string& uid) const;
  // uids in lexicographic order.
  std::vector<std::string> uids() const;
  const std::filesystem::path& source_dir() const noexcept { return source_dir_; }

 private:
  std::map<std::string, Rir> entries_;
  std::filesystem::path source_dir_;
};

struct RirBankLoad {
  RirBank bank;
  std::vector<std::string> warnings;  // one per skipped folder
};

// Directory of <uid>/RIR.wav folders with optional <uid>/meta.json
// {mic, speaker}. Unreadable entries are skipped with a warning; an empty or
// entirely unreadable directory is an error.
RirBankLoad load_rir_bank(const std::filesystem::path& dir);

// Above this many multiply-adds (n * m) convolution runs in the frequency
// domain; at or below it the direct sum is used.
inline constexpr std::size_t kDirectConvolutionLimit = 1u << 16;
// Operands this short always use the direct sum.
inline constexpr std::size_t kDirectShortOperand = 32;

enum class ConvolutionMethod { kAuto, kDirect, kFft };

// Full linear convolution, length n + m - 1. kAuto picks by
// kDirectConvolutionLimit and kDirectShortOperand.
std::vector<double> convolve_full(std::span<const double> signal,
                                  std::span<const double> kernel,
                                  ConvolutionMethod method = ConvolutionMethod::kAuto);

// Convolution with the RIR truncated to the input length and rescaled to the
// input's original peak. Rates must match.
AudioBuffer convolve(const AudioBuffer& signal, const Rir& rir,
                     ConvolutionMethod method = ConvolutionMethod::kAuto);

// convolve, then optionally mix a noise floor. The result never exceeds unit
// peak.
AudioBuffer simulate_replay(const AudioBuffer& signal, const Rir& rir,
                            const std::optional<NoiseSpec>& noise_floor);

struct ReplayResult {
  AudioBuffer audio;
  std::optional<MixResult> mix;  // set when a noise floor was mixed
  double post_scale = 1.0;       // final clip protection, 1.0 if unused
};
ReplayResult simulate_replay_detailed(const AudioBuffer& signal, const Rir& rir,
                                      const std::optional<NoiseSpec>& noise_floor);

struct AugmentOptions {
  double probability = 0.5;
  std::uint64_t seed = 0;
  std::filesystem::path root = ".";      // resolves manifest paths
  std::filesystem::path out_dir = "augmented";
  WavEncoding encoding = WavEncoding::kFloat32;
  unsigned workers = 1;
};

struct EntryError {
  std::size_t index;
  std::string file;
  std::string message;
};

struct AugmentResult {
  Manifest manifest;
  std::vector<EntryError> errors;
  std::size_t augmented = 0;
};

// Each entry independently, with the given probability, is convolved with an
// RIR drawn uniformly from the bank and written under out_dir/<uid>/. The
// augmented entry keeps original_file, gets recorded_file, uid, mic and
// speaker of the drawn setup and "augmented": true. Decisions are seeded per
// entry, so the result does not depend on the worker count.
AugmentResult augment_manifest(const Manifest& manifest, const RirBank& bank,
                               const AugmentOptions& options);

// Resamples the RIR when its rate differs from `rate`.
Rir rir_at_rate(const Rir& rir, int rate);

}  // namespace replaydf

#endif  // REPLAYDF_REPLAY_HPP_

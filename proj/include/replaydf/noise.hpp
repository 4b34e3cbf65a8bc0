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

#ifndef REPLAYDF_NOISE_HPP_
#define REPLAYDF_NOISE_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "replaydf/audio.hpp"

namespace replaydf {

// gaussian: i.i.d. normal amplitudes. white: i.i.d. uniform amplitudes on
// [-1, 1]. Both are spectrally flat. pink: 1/f power spectral density.
enum class NoiseKind { kGaussian, kWhite, kPink };

std::string_view to_string(NoiseKind kind) noexcept;
NoiseKind parse_noise_kind(std::string_view name);

// RMS of every generated noise buffer.
inline constexpr double kNoiseRms = 0.1;

// Mixtures whose peak exceeds 1 are rescaled to this peak.
inline constexpr double kClipPeak = 0.95;

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kGaussian;
  std::uint64_t seed = 0;
  // Target SNR is drawn uniformly from [snr_lo_db, snr_hi_db]; equal bounds
  // fix it.
  double snr_lo_db = 15.0;
  double snr_hi_db = 40.0;

  static NoiseSpec fixed(NoiseKind kind, std::uint64_t seed, double snr_db) {
    return {kind, seed, snr_db, snr_db};
  }
  // Throws InputError unless both bounds are finite and lo <= hi.
  void validate() const;
};

struct MixResult {
  AudioBuffer mixture;
  double achieved_snr_db = 0.0;
  double gain = 0.0;
  double drawn_snr_db = 0.0;
  std::uint64_t seed = 0;
  // 1.0 unless the mixture would clip.
  double post_scale = 1.0;
};

AudioBuffer generate_noise(NoiseKind kind, std::size_t num_samples,
                           int sample_rate, std::uint64_t seed);

// Linear noise gain g with 10*log10(signal_power / (g^2 * noise_power)) equal
// to target_snr_db.
double snr_gain(double signal_power, double noise_power, double target_snr_db);

// Noise is generated at the signal's rate and length from spec.seed; the SNR
// draw uses an independent stream derived from the same seed.
MixResult mix_at_snr(const AudioBuffer& signal, const NoiseSpec& spec);

double snr_db(double signal_power, double noise_power);

nlohmann::json mix_record(const std::string& input, const std::string& output,
                          NoiseKind kind, const MixResult& result);

}  // namespace replaydf

#endif  // REPLAYDF_NOISE_HPP_

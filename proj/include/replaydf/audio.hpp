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

#ifndef REPLAYDF_AUDIO_HPP_
#define REPLAYDF_AUDIO_HPP_

#include <filesystem>
#include <span>
#include <vector>

namespace replaydf {

// Mono signal with float64 samples, nominal range [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  AudioBuffer() = default;
  AudioBuffer(std::vector<double> s, int rate);

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double duration_seconds() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate;
  }

  friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;
};

enum class WavEncoding { kPcm16, kFloat32 };

// Reads PCM16 or IEEE float32 RIFF/WAVE. Multi-channel input is downmixed by
// arithmetic mean; PCM16 is scaled by 1/32768.
AudioBuffer read_wav(const std::filesystem::path& path);

// PCM16 clamps to [-1, 1 - 2^-15] before rounding to the nearest code.
void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer,
               WavEncoding encoding = WavEncoding::kFloat32);

// In-memory variants used by the file functions and by tests.
AudioBuffer decode_wav(std::span<const unsigned char> bytes);
std::vector<unsigned char> encode_wav(const AudioBuffer& buffer,
                                      WavEncoding encoding);

/// Windowed-sinc resampler. The kernel spans kResampleZeroCrossings zero
/// crossings of the lower of the two Nyquist rates on each side and is
/// shaped by a Kaiser window with beta kResampleKaiserBeta. Output length is
/// round(N * target / source), so duration is preserved within one sample.
inline constexpr int kResampleZeroCrossings = 32;
inline constexpr double kResampleKaiserBeta = 8.6;
AudioBuffer resample(const AudioBuffer& buffer, int target_rate);

// Mean of squared samples. Throws DomainError on empty input.
double rms_power(std::span<const double> samples);
inline double rms_power(const AudioBuffer& buffer) {
  return rms_power(buffer.samples);
}

double peak(std::span<const double> samples) noexcept;

// Scales so that max |sample| == target_peak. All-zero input is returned
// unchanged.
AudioBuffer peak_normalize(const AudioBuffer& buffer, double target_peak);

}  // namespace replaydf

#endif  // REPLAYDF_AUDIO_HPP_

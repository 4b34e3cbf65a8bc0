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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "replaydf/audio.hpp"
#include "replaydf/errors.hpp"

namespace replaydf {

AudioBuffer::AudioBuffer(std::vector<double> s, int rate)
    : samples(std::move(s)), sample_rate(rate) {
  if (rate <= 0) throw InputError("sample rate must be positive");
}

double rms_power(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("rms_power of an empty buffer");
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return acc / static_cast<double>(samples.size());
}

double peak(std::span<const double> samples) noexcept {
  double p = 0.0;
  for (double s : samples) p = std::max(p, std::abs(s));
  return p;
}

AudioBuffer peak_normalize(const AudioBuffer& buffer, double target_peak) {
  if (!(target_peak > 0.0 && target_peak <= 1.0)) {
    throw InputError("peak_normalize: target peak must lie in (0, 1]");
  }
  const double current = peak(buffer.samples);
  AudioBuffer out = buffer;
  if (current == 0.0) return out;
  const double scale = target_peak / current;
  for (double& s : out.samples) s *= scale;
  return out;
}

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double kaiser(double u, double beta) {
  if (std::abs(u) >= 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - u * u)) /
         std::cyl_bessel_i(0.0, beta);
}

}  // namespace

AudioBuffer resample(const AudioBuffer& buffer, int target_rate) {
  if (target_rate <= 0) throw InputError("resample: target rate must be positive");
  if (target_rate == buffer.sample_rate) return buffer;

  const double ratio = static_cast<double>(target_rate) / buffer.sample_rate;
  const double cutoff = std::min(1.0, ratio);  // fraction of source Nyquist
  const double half_width = kResampleZeroCrossings / cutoff;  // source samples
  const auto n_in = static_cast<std::ptrdiff_t>(buffer.samples.size());
  const auto n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_in) * ratio));

  AudioBuffer out;
  out.sample_rate = target_rate;
  out.samples.resize(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    const double t = static_cast<double>(j) / ratio;
    const auto first = static_cast<std::ptrdiff_t>(std::ceil(t - half_width));
    const auto last = static_cast<std::ptrdiff_t>(std::floor(t + half_width));
    double acc = 0.0;
    double norm = 0.0;
    for (std::ptrdiff_t i = first; i <= last; ++i) {
      const double x = t - static_cast<double>(i);
      const double w = cutoff * sinc(cutoff * x) *
                       kaiser(x / half_width, kResampleKaiserBeta);
      norm += w;
      if (i >= 0 && i < n_in) acc += w * buffer.samples[static_cast<std::size_t>(i)];
    }
    // Unit DC gain; taps falling outside the signal behave as zero padding.
    out.samples[j] = norm != 0.0 ? acc / norm : 0.0;
  }
  return out;
}

}  // namespace replaydf

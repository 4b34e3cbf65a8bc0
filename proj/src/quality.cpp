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

#include "replaydf/fft.hpp"
#include "replaydf/metrics.hpp"

namespace replaydf {
namespace {

struct Framing {
  std::size_t length;
  std::size_t hop;
  std::size_t count;
};

Framing framing_for(const AudioBuffer& reference, const AudioBuffer& degraded) {
  if (reference.sample_rate != degraded.sample_rate) {
    throw InputError("quality metric: sample rates differ");
  }
  if (reference.size() != degraded.size()) {
    throw InputError("quality metric: lengths differ (" +
                     std::to_string(reference.size()) + " vs " +
                     std::to_string(degraded.size()) + ")");
  }
  if (reference.empty()) throw DomainError("quality metric: empty signals");
  auto length = static_cast<std::size_t>(
      std::lround(kQualityFrameSeconds * reference.sample_rate));
  length = std::clamp<std::size_t>(length, 1, reference.size());
  const std::size_t hop = std::max<std::size_t>(1, length / 2);
  const std::size_t count = 1 + (reference.size() - length) / hop;
  return {length, hop, count};
}

}  // namespace

double segmental_snr(const AudioBuffer& reference, const AudioBuffer& degraded) {
  const Framing f = framing_for(reference, degraded);
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < f.count; ++k) {
    const std::size_t start = k * f.hop;
    double signal = 0.0, error = 0.0;
    for (std::size_t i = start; i < start + f.length; ++i) {
      const double r = reference.samples[i];
      const double e = r - degraded.samples[i];
      signal += r * r;
      error += e * e;
    }
    if (signal < kSilentFrameEnergy) continue;
    const double db = error == 0.0 ? kSegSnrCeilingDb : 10.0 * std::log10(signal / error);
    total += std::clamp(db, kSegSnrFloorDb, kSegSnrCeilingDb);
    ++used;
  }
  if (used == 0) throw DomainError("segmental SNR: reference is silent");
  return total / static_cast<double>(used);
}

double log_spectral_distance(const AudioBuffer& reference,
                             const AudioBuffer& degraded) {
  const Framing f = framing_for(reference, degraded);
  const std::size_t size = fft::next_pow2(f.length);
  std::vector<double> window(f.length);
  for (std::size_t i = 0; i < f.length; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(f.length));
  }
  std::vector<double> a(f.length), b(f.length);
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < f.count; ++k) {
    const std::size_t start = k * f.hop;
    for (std::size_t i = 0; i < f.length; ++i) {
      a[i] = reference.samples[start + i] * window[i];
      b[i] = degraded.samples[start + i] * window[i];
    }
    const auto sa = fft::real_spectrum(a, size);
    const auto sb = fft::real_spectrum(b, size);
    double frame = 0.0;
    for (std::size_t bin = 0; bin < sa.size(); ++bin) {
      const double la = 10.0 * std::log10(std::max(std::norm(sa[bin]), kLogPowerFloor));
      const double lb = 10.0 * std::log10(std::max(std::norm(sb[bin]), kLogPowerFloor));
      frame += (la - lb) * (la - lb);
    }
    sum_sq += frame / static_cast<double>(sa.size());
  }
  return std::sqrt(sum_sq / static_cast<double>(f.count));
}

}  // namespace replaydf

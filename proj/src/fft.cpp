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

#include "replaydf/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace replaydf::fft {

std::size_t next_pow2(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void transform(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fft size must be a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = (inverse ? 2.0 : -2.0) * std::numbers::pi /
                         static_cast<double>(len);
    const std::size_t half = len / 2;
    // Twiddles computed directly per index; recurrence drift would break the
    // 1e-9 agreement with direct convolution on long transforms.
    std::vector<std::complex<double>> twiddle(half);
    for (std::size_t k = 0; k < half; ++k) {
      twiddle[k] = std::polar(1.0, angle * static_cast<double>(k));
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const auto u = data[i + k];
        const auto v = data[i + k + half] * twiddle[k];
        data[i + k] = u + v;
        data[i + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : data) c *= scale;
  }
}

std::vector<std::complex<double>> real_spectrum(std::span<const double> x,
                                                std::size_t size) {
  std::vector<std::complex<double>> buf(size);
  for (std::size_t i = 0; i < x.size() && i < size; ++i) buf[i] = x[i];
  transform(buf, false);
  buf.resize(size / 2 + 1);
  return buf;
}

std::vector<double> inverse_real_spectrum(
    std::span<const std::complex<double>> bins, std::size_t size) {
  if (bins.size() != size / 2 + 1) {
    throw std::invalid_argument("bin count does not match transform size");
  }
  std::vector<std::complex<double>> buf(size);
  for (std::size_t k = 0; k < bins.size(); ++k) buf[k] = bins[k];
  for (std::size_t k = 1; k < size / 2; ++k) buf[size - k] = std::conj(bins[k]);
  transform(buf, true);
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = buf[i].real();
  return out;
}

}  // namespace replaydf::fft

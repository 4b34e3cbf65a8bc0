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

#ifndef REPLAYDF_FFT_HPP_
#define REPLAYDF_FFT_HPP_

#include <complex>
#include <span>
#include <vector>

namespace replaydf::fft {

std::size_t next_pow2(std::size_t n) noexcept;

// In-place iterative radix-2 transform. size must be a power of two.
// The inverse is scaled by 1/N.
void transform(std::vector<std::complex<double>>& data, bool inverse);

// Spectrum of a real signal zero-padded to `size` (power of two); returns
// bins 0..size/2 inclusive.
std::vector<std::complex<double>> real_spectrum(std::span<const double> x,
                                                std::size_t size);

// Inverse of real_spectrum: takes size/2+1 bins, returns `size` real samples.
std::vector<double> inverse_real_spectrum(
    std::span<const std::complex<double>> bins, std::size_t size);

}  // namespace replaydf::fft

#endif  // REPLAYDF_FFT_HPP_

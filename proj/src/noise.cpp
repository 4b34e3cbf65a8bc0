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

#include "replaydf/noise.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "replaydf/errors.hpp"
#include "replaydf/fft.hpp"
#include "replaydf/random.hpp"

namespace replaydf {

std::string_view to_string(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::kGaussian: return "gaussian";
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kPink: return "pink";
  }
  return "gaussian";
}

NoiseKind parse_noise_kind(std::string_view text) {
  std::string name(text);
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (name == "gaussian") return NoiseKind::kGaussian;
  if (name == "white") return NoiseKind::kWhite;
  if (name == "pink") return NoiseKind::kPink;
  throw InputError("unknown noise kind '" + std::string(text) +
                   "' (expected gaussian, white or pink)");
}

void NoiseSpec::validate() const {
  if (!std::isfinite(snr_lo_db) || !std::isfinite(snr_hi_db)) {
    throw InputError("SNR bounds must be finite");
  }
  if (snr_lo_db > snr_hi_db) throw InputError("SNR range has lo > hi");
}

namespace {

std::vector<double> pink_shape(Rng& rng, std::size_t n) {
  const std::size_t size = std::max<std::size_t>(2, fft::next_pow2(n));
  std::vector<double> white(size);
  for (double& s : white) s = rng.normal();
  auto bins = fft::real_spectrum(white, size);
  bins[0] = 0.0;
  for (std::size_t k = 1; k < bins.size(); ++k) {
    bins[k] /= std::sqrt(static_cast<double>(k));
  }
  auto shaped = fft::inverse_real_spectrum(bins, size);
  shaped.resize(n);
  return shaped;
}

}  // namespace

AudioBuffer generate_noise(NoiseKind kind, std::size_t num_samples,
                           int sample_rate, std::uint64_t seed) {
  if (num_samples == 0) throw InputError("generate_noise: num_samples must be > 0");
  Rng rng(seed);
  std::vector<double> s;
  switch (kind) {
    case NoiseKind::kGaussian:
      s.resize(num_samples);
      for (double& v : s) v = rng.normal();
      break;
    case NoiseKind::kWhite:
      s.resize(num_samples);
      for (double& v : s) v = rng.uniform(-1.0, 1.0);
      break;
    case NoiseKind::kPink:
      s = pink_shape(rng, num_samples);
      break;
  }
  const double power = rms_power(s);
  if (power > 0.0) {
    const double scale = kNoiseRms / std::sqrt(power);
    for (double& v : s) v *= scale;
  }
  return AudioBuffer(std::move(s), sample_rate);
}

double snr_gain(double signal_power, double noise_power, double target_snr_db) {
  if (!(signal_power > 0.0)) throw DomainError("signal power must be positive (silent input?)");
  if (!(noise_power > 0.0)) throw DomainError("noise power must be positive");
  if (!std::isfinite(target_snr_db)) throw InputError("target SNR must be finite");
  return std::sqrt(signal_power /
                   (noise_power * std::pow(10.0, target_snr_db / 10.0)));
}

double snr_db(double signal_power, double noise_power) {
  return 10.0 * std::log10(signal_power / noise_power);
}

MixResult mix_at_snr(const AudioBuffer& signal, const NoiseSpec& spec) {
  spec.validate();
  if (signal.empty()) throw DomainError("cannot mix noise into an empty signal");
  const double signal_power = rms_power(signal);
  if (signal_power == 0.0) throw DomainError("cannot mix noise into a silent signal");

  MixResult r;
  r.seed = spec.seed;
  if (spec.snr_lo_db == spec.snr_hi_db) {
    r.drawn_snr_db = spec.snr_lo_db;
  } else {
    Rng draw(derive_seed(spec.seed, {"snr"}));
    r.drawn_snr_db = draw.uniform(spec.snr_lo_db, spec.snr_hi_db);
  }
  const AudioBuffer noise =
      generate_noise(spec.kind, signal.size(), signal.sample_rate, spec.seed);
  r.gain = snr_gain(signal_power, rms_power(noise), r.drawn_snr_db);

  std::vector<double> scaled(noise.samples);
  for (double& v : scaled) v *= r.gain;
  r.achieved_snr_db = snr_db(signal_power, rms_power(scaled));

  r.mixture = signal;
  for (std::size_t i = 0; i < scaled.size(); ++i) r.mixture.samples[i] += scaled[i];
  const double p = peak(r.mixture.samples);
  if (p > 1.0) {
    r.post_scale = kClipPeak / p;
    for (double& v : r.mixture.samples) v *= r.post_scale;
  }
  return r;
}

nlohmann::json mix_record(const std::string& input, const std::string& output,
                          NoiseKind kind, const MixResult& result) {
  return {
      {"input", input},
      {"output", output},
      {"kind", std::string(to_string(kind))},
      {"seed", result.seed},
      {"drawn_snr_db", result.drawn_snr_db},
      {"achieved_snr_db", result.achieved_snr_db},
      {"gain", result.gain},
      {"post_scale", result.post_scale},
  };
}

}  // namespace replaydf

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

#ifndef REPLAYDF_DETECTOR_HPP_
#define REPLAYDF_DETECTOR_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"
#include "replaydf/audio.hpp"
#include "replaydf/manifest.hpp"

namespace replaydf {

// Log band energies floor: log(max(energy, kLogEnergyFloor)).
inline constexpr double kLogEnergyFloor = 1e-10;

// Hann-windowed frames, power spectrum pooled into triangular bands equally
// spaced on the mel scale from 0 Hz to Nyquist.
struct FeatureConfig {
  int sample_rate = 16000;
  std::size_t frame_size = 512;
  std::size_t hop_size = 256;
  std::size_t num_bands = 40;

  std::size_t dimension() const noexcept { return 2 * num_bands; }
  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// Per band: mean then standard deviation of log energy over frames. Layout
// is [mean_0 .. mean_{B-1}, std_0 .. std_{B-1}].
using FeatureVector = std::vector<double>;

FeatureVector extract_features(const AudioBuffer& audio,
                               const FeatureConfig& config = {});

// Band edge frequencies in Hz, num_bands + 2 of them; band k spans
// [edges[k], edges[k + 2]] with its peak at edges[k + 1].
std::vector<double> band_edges_hz(const FeatureConfig& config);

struct DetectorModel {
  FeatureConfig feature_config;
  std::vector<double> means;  // training feature statistics
  std::vector<double> stds;
  std::vector<double> weights;
  double bias = 0.0;
};

struct TrainConfig {
  // Initial step size; halved whenever a step would increase the loss.
  double learning_rate = 0.5;
  std::size_t epochs = 2000;
  std::uint64_t seed = 0;
  // Training stops once an epoch improves the loss by less than this.
  double min_improvement = 1e-8;
};

struct TrainResult {
  DetectorModel model;
  std::vector<double> loss_history;  // loss before each epoch, then final
};

// Full-batch gradient descent on the mean logistic negative log-likelihood
// from zero weights, on z-scored features. Spoof is the positive class.
TrainResult train_detector(std::span<const FeatureVector> features,
                           std::span<const Label> labels,
                           const TrainConfig& config,
                           const FeatureConfig& feature_config = {});
inline DetectorModel train(std::span<const FeatureVector> features,
                           std::span<const Label> labels,
                           const TrainConfig& config,
                           const FeatureConfig& feature_config = {}) {
  return train_detector(features, labels, config, feature_config).model;
}

// Mean negative log-likelihood and its gradient for standardized inputs.
// gradient has weights.size() + 1 entries, the last for the bias.
double logistic_loss(std::span<const std::vector<double>> standardized,
                     std::span<const double> targets,
                     std::span<const double> weights, double bias,
                     std::vector<double>* gradient = nullptr);

// Probability of spoof in (0, 1).
double score(const DetectorModel& model, std::span<const double> features);

nlohmann::ordered_json to_json(const DetectorModel& model);
DetectorModel model_from_json(const nlohmann::json& j);
void save_model(const DetectorModel& model, const std::filesystem::path& path);
DetectorModel load_model(const std::filesystem::path& path);

}  // namespace replaydf

#endif  // REPLAYDF_DETECTOR_HPP_

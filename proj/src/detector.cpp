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

#include "replaydf/detector.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "replaydf/errors.hpp"
#include "replaydf/fft.hpp"

namespace replaydf {
namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Rows: bands; columns: FFT bins 0..fft_size/2.
std::vector<std::vector<double>> filterbank(const FeatureConfig& c,
                                            std::size_t fft_size) {
  const auto edges = band_edges_hz(c);
  const std::size_t bins = fft_size / 2 + 1;
  std::vector<std::vector<double>> fb(c.num_bands, std::vector<double>(bins, 0.0));
  for (std::size_t k = 0; k < c.num_bands; ++k) {
    const double lo = edges[k], mid = edges[k + 1], hi = edges[k + 2];
    for (std::size_t b = 0; b < bins; ++b) {
      const double f = static_cast<double>(b) * c.sample_rate / static_cast<double>(fft_size);
      if (f > lo && f < mid) fb[k][b] = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi) fb[k][b] = (hi - f) / (hi - mid);
    }
  }
  return fb;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

constexpr int kMaxStepHalvings = 60;

}  // namespace

std::vector<double> band_edges_hz(const FeatureConfig& c) {
  const double top = hz_to_mel(c.sample_rate / 2.0);
  std::vector<double> edges(c.num_bands + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(top * static_cast<double>(i) /
                         static_cast<double>(c.num_bands + 1));
  }
  return edges;
}

FeatureVector extract_features(const AudioBuffer& audio, const FeatureConfig& c) {
  if (c.num_bands == 0 || c.frame_size == 0 || c.hop_size == 0) {
    throw InputError("feature config needs positive band count, frame and hop");
  }
  if (audio.sample_rate != c.sample_rate) {
    throw InputError("feature extraction expects " + std::to_string(c.sample_rate) +
                     " Hz audio, got " + std::to_string(audio.sample_rate) + " Hz");
  }
  if (audio.size() < c.frame_size) {
    throw InputError("audio shorter than one analysis frame (" +
                     std::to_string(audio.size()) + " < " +
                     std::to_string(c.frame_size) + " samples)");
  }
  const std::size_t fft_size = fft::next_pow2(c.frame_size);
  const auto fb = filterbank(c, fft_size);
  std::vector<double> window(c.frame_size);
  for (std::size_t i = 0; i < c.frame_size; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(c.frame_size));
  }

  const std::size_t frames = 1 + (audio.size() - c.frame_size) / c.hop_size;
  // Running mean and squared deviation per band (Welford).
  std::vector<double> mean(c.num_bands, 0.0), m2(c.num_bands, 0.0);
  std::vector<double> frame(c.frame_size);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t start = t * c.hop_size;
    for (std::size_t i = 0; i < c.frame_size; ++i) {
      frame[i] = audio.samples[start + i] * window[i];
    }
    const auto spectrum = fft::real_spectrum(frame, fft_size);
    for (std::size_t k = 0; k < c.num_bands; ++k) {
      double energy = 0.0;
      for (std::size_t b = 0; b < spectrum.size(); ++b) {
        if (fb[k][b] != 0.0) energy += fb[k][b] * std::norm(spectrum[b]);
      }
      const double le = std::log(std::max(energy, kLogEnergyFloor));
      const double delta = le - mean[k];
      mean[k] += delta / static_cast<double>(t + 1);
      m2[k] += delta * (le - mean[k]);
    }
  }
  FeatureVector out(c.dimension());
  const double n = static_cast<double>(frames);
  for (std::size_t k = 0; k < c.num_bands; ++k) {
    out[k] = mean[k];
    out[c.num_bands + k] = std::sqrt(std::max(0.0, m2[k] / n));
  }
  return out;
}

double logistic_loss(std::span<const std::vector<double>> standardized,
                     std::span<const double> targets,
                     std::span<const double> weights, double bias,
                     std::vector<double>* gradient) {
  const std::size_t n = standardized.size();
  const std::size_t d = weights.size();
  if (gradient) gradient->assign(d + 1, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = standardized[i];
    double z = bias;
    for (std::size_t k = 0; k < d; ++k) z += weights[k] * x[k];
    loss += softplus(z) - targets[i] * z;
    if (gradient) {
      const double r = sigmoid(z) - targets[i];
      for (std::size_t k = 0; k < d; ++k) (*gradient)[k] += r * x[k];
      (*gradient)[d] += r;
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  if (gradient) {
    for (double& g : *gradient) g *= inv;
  }
  return loss * inv;
}

TrainResult train_detector(std::span<const FeatureVector> features,
                           std::span<const Label> labels,
                           const TrainConfig& config,
                           const FeatureConfig& feature_config) {
  if (features.size() != labels.size()) {
    throw InputError("train: feature and label counts differ");
  }
  if (features.empty()) throw DomainError("train: no examples");
  const std::size_t d = features.front().size();
  std::size_t spoof = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != d) throw InputError("train: inconsistent feature dimensions");
    for (double v : features[i]) {
      if (!std::isfinite(v)) throw DomainError("train: non-finite feature value");
    }
    if (labels[i] == Label::kSpoof) ++spoof;
  }
  if (spoof == 0 || spoof == features.size()) {
    throw DomainError("train: need at least one example of each class");
  }

  TrainResult result;
  DetectorModel& m = result.model;
  m.feature_config = feature_config;
  m.means.assign(d, 0.0);
  m.stds.assign(d, 0.0);
  const double n = static_cast<double>(features.size());
  for (const auto& f : features) {
    for (std::size_t k = 0; k < d; ++k) m.means[k] += f[k];
  }
  for (double& v : m.means) v /= n;
  for (const auto& f : features) {
    for (std::size_t k = 0; k < d; ++k) m.stds[k] += (f[k] - m.means[k]) * (f[k] - m.means[k]);
  }
  for (double& v : m.stds) {
    v = std::sqrt(v / n);
    if (v < 1e-12) v = 1.0;  // constant dimension
  }

  std::vector<std::vector<double>> z(features.size(), std::vector<double>(d));
  std::vector<double> targets(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) z[i][k] = (features[i][k] - m.means[k]) / m.stds[k];
    targets[i] = labels[i] == Label::kSpoof ? 1.0 : 0.0;
  }

  m.weights.assign(d, 0.0);
  m.bias = 0.0;
  std::vector<double> grad;
  double loss = logistic_loss(z, targets, m.weights, m.bias, &grad);
  result.loss_history.push_back(loss);
  // The step is halved whenever it would increase the loss.
  double step = config.learning_rate;
  std::vector<double> next_weights(d), next_grad;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double next = loss;
    double next_bias = m.bias;
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxStepHalvings; ++attempt) {
      for (std::size_t k = 0; k < d; ++k) next_weights[k] = m.weights[k] - step * grad[k];
      next_bias = m.bias - step * grad[d];
      next = logistic_loss(z, targets, next_weights, next_bias, &next_grad);
      if (next <= loss) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    m.weights.swap(next_weights);
    m.bias = next_bias;
    grad.swap(next_grad);
    result.loss_history.push_back(next);
    const double improvement = loss - next;
    loss = next;
    if (improvement < config.min_improvement) break;
  }
  return result;
}

double score(const DetectorModel& model, std::span<const double> features) {
  if (features.size() != model.weights.size() ||
      model.means.size() != model.weights.size() ||
      model.stds.size() != model.weights.size()) {
    throw InputError("score: feature dimension " + std::to_string(features.size()) +
                     " does not match model dimension " +
                     std::to_string(model.weights.size()));
  }
  double z = model.bias;
  for (std::size_t k = 0; k < features.size(); ++k) {
    z += model.weights[k] * (features[k] - model.means[k]) / model.stds[k];
  }
  return sigmoid(z);
}

nlohmann::ordered_json to_json(const DetectorModel& m) {
  nlohmann::ordered_json j;
  j["feature_config"] = {{"sample_rate", m.feature_config.sample_rate},
                         {"frame_size", m.feature_config.frame_size},
                         {"hop_size", m.feature_config.hop_size},
                         {"num_bands", m.feature_config.num_bands}};
  j["means"] = m.means;
  j["stds"] = m.stds;
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  return j;
}

DetectorModel model_from_json(const nlohmann::json& j) {
  DetectorModel m;
  try {
    const auto& fc = j.at("feature_config");
    m.feature_config.sample_rate = fc.at("sample_rate").get<int>();
    m.feature_config.frame_size = fc.at("frame_size").get<std::size_t>();
    m.feature_config.hop_size = fc.at("hop_size").get<std::size_t>();
    m.feature_config.num_bands = fc.at("num_bands").get<std::size_t>();
    m.means = j.at("means").get<std::vector<double>>();
    m.stds = j.at("stds").get<std::vector<double>>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid model JSON: ") + e.what());
  }
  if (m.means.size() != m.weights.size() || m.stds.size() != m.weights.size()) {
    throw InputError("model means, stds and weights differ in length");
  }
  return m;
}

void save_model(const DetectorModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_json(model).dump(2) << '\n';
}

DetectorModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return model_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace replaydf

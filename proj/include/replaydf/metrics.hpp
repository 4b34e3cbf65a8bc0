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

#ifndef REPLAYDF_METRICS_HPP_
#define REPLAYDF_METRICS_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "replaydf/audio.hpp"
#include "replaydf/errors.hpp"
#include "replaydf/manifest.hpp"

namespace replaydf {

// Detector output for one file. Higher scores are more spoof-like; spoof is
// the positive class.
struct ScoreRecord {
  std::string file_id;
  double score = 0.0;
  std::optional<Label> label;
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
  std::size_t num_spoof = 0;
  std::size_t num_bona = 0;
};

/**
 * Equal error rate.
 *
 * For threshold t the false-acceptance rate is the fraction of bona fide
 * scores >= t and the miss rate the fraction of spoof scores < t. Every
 * distinct score is tried as a threshold, plus a final point above all
 * scores (FAR 0, miss 1). FAR - miss is non-increasing along the sweep; the
 * EER is read at the first point where it reaches zero, or linearly
 * interpolated between the two operating points where it changes sign.
 * When the crossing falls past the highest score, the reported threshold is
 * the highest score.
 *
 * Labels are required. Throws DomainError unless both classes are present.
 */
EerResult compute_eer(std::span<const ScoreRecord> records);
EerResult compute_eer(std::span<const double> spoof_scores,
                      std::span<const double> bona_scores);

// Fraction of records where (score > threshold) == (label == spoof).
double accuracy_at_threshold(std::span<const ScoreRecord> records,
                             double threshold = 0.5);

// Record whose file_id could not be matched against a manifest.
class UnjoinableError : public InputError {
 public:
  explicit UnjoinableError(std::vector<std::string> ids);
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
};

struct JoinedRecord {
  ScoreRecord record;  // label filled from the manifest when absent
  const ManifestEntry* entry = nullptr;
  bool recorded = false;  // matched recorded_file rather than original_file
};

// Matches each file_id against recorded_file first, then original_file.
std::vector<JoinedRecord> join_scores(std::span<const ScoreRecord> records,
                                      const Manifest& manifest);

struct GroupAccuracy {
  double accuracy = 0.0;
  std::size_t count = 0;
};

// Accuracy at `threshold` per architecture, with bona fide as its own group.
std::map<std::string, GroupAccuracy> per_attack_accuracy(
    std::span<const ScoreRecord> records, const Manifest& manifest,
    double threshold = 0.5);
std::map<std::string, GroupAccuracy> per_attack_accuracy(
    std::span<const JoinedRecord> joined, double threshold = 0.5);

// Sample Pearson coefficient. Throws DomainError on length mismatch, fewer
// than two points or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// Frames for the quality proxies: 32 ms with 50% overlap.
inline constexpr double kQualityFrameSeconds = 0.032;
inline constexpr double kSegSnrFloorDb = -10.0;
inline constexpr double kSegSnrCeilingDb = 35.0;
// Reference frames with less energy than this are skipped.
inline constexpr double kSilentFrameEnergy = 1e-10;
// Power floor applied before taking log spectra.
inline constexpr double kLogPowerFloor = 1e-12;

double segmental_snr(const AudioBuffer& reference, const AudioBuffer& degraded);
double log_spectral_distance(const AudioBuffer& reference,
                             const AudioBuffer& degraded);

struct SetupQuality {
  std::string uid;
  std::optional<double> mos;   // [1, 5]
  std::optional<double> pesq;  // [-0.5, 4.5]
  double spoof_accuracy = 0.0;
};

struct Correlation {
  std::optional<double> r;  // absent when undefined
  std::size_t pairs = 0;    // pairwise-complete observations
  // Exactly two points: |r| is 1 whenever both vary.
  bool two_point = false;
  std::string note;
};

struct CorrelationTriple {
  Correlation acc_vs_mos;
  Correlation acc_vs_pesq;
  Correlation mos_vs_pesq;
};

CorrelationTriple quality_correlation(std::span<const SetupQuality> per_setup);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  std::size_t n = 0;
};

using TrialMetrics = std::map<std::string, double>;

// Per-metric mean and population standard deviation over the trials that
// report that metric.
std::map<std::string, MeanStd> aggregate_trials(
    std::span<const TrialMetrics> trials);

// Score CSV: header file_id,score[,label].
std::vector<ScoreRecord> read_scores(const std::filesystem::path& path);
void write_scores(const std::filesystem::path& path,
                  std::span<const ScoreRecord> records);

enum class QualityMeasure { kMos, kPesq };

// CSV uid,mos or uid,pesq. Values outside the measure's range are rejected.
std::map<std::string, double> read_quality(const std::filesystem::path& path,
                                           QualityMeasure measure);

struct ListenerAverage {
  double mos = 0.0;
  std::size_t ratings = 0;
  std::size_t listeners = 0;
};

// Raw listening-test CSV uid,listener,score averaged per uid over all ratings.
std::map<std::string, ListenerAverage> average_listener_scores(
    const std::filesystem::path& path);

}  // namespace replaydf

#endif  // REPLAYDF_METRICS_HPP_

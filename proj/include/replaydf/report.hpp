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

#ifndef REPLAYDF_REPORT_HPP_
#define REPLAYDF_REPORT_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "replaydf/metrics.hpp"

namespace replaydf {

// Records that matched original_file form the "baseline" condition, those
// that matched recorded_file the "recorded" condition.
inline constexpr std::string_view kBaselineCondition = "baseline";
inline constexpr std::string_view kRecordedCondition = "recorded";

struct ConditionResult {
  std::string name;
  std::size_t count = 0;
  double accuracy = 0.0;
  std::optional<EerResult> eer;  // absent unless both classes are present
  std::map<std::string, GroupAccuracy> per_attack;
};

struct EvalReport {
  double threshold = 0.5;
  // Averaged over trials when more than one score file is evaluated.
  std::vector<ConditionResult> conditions;
  std::vector<SetupQuality> per_setup;
  std::optional<CorrelationTriple> correlations;
  std::vector<TrialMetrics> trials;
  std::map<std::string, MeanStd> summary;
};

// Evaluates one or more trials (score sets) against a manifest. Throws
// UnjoinableError when any record cannot be joined.
EvalReport evaluate(std::span<const std::vector<ScoreRecord>> trials,
                    const Manifest& manifest, double threshold = 0.5);

nlohmann::ordered_json to_json(const EvalReport& report);
nlohmann::ordered_json to_json(const CorrelationTriple& c);
// Reads the fields cmd_correlate needs (threshold, per_setup).
EvalReport report_from_json(const nlohmann::json& j);

// Plain-text table: overall accuracy/EER per condition and the per-attack
// rows Bark, VITS, XTTS v1.1, XTTS v2, bona fide.
std::string render_table(const EvalReport& report);

struct ScatterPoint {
  std::string uid;
  std::string measure;  // "mos" or "pesq"
  double quality = 0.0;
  double accuracy = 0.0;
};

std::vector<ScatterPoint> scatter_points(std::span<const SetupQuality> per_setup);
std::string render_scatter_csv(std::span<const ScatterPoint> points);
std::string render_scatter_svg(std::span<const ScatterPoint> points,
                               const CorrelationTriple& correlations);

}  // namespace replaydf

#endif  // REPLAYDF_REPORT_HPP_

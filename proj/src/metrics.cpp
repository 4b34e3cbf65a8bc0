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

#include "replaydf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <unordered_map>

#include "replaydf/csv.hpp"

namespace replaydf {

EerResult compute_eer(std::span<const double> spoof_scores,
                      std::span<const double> bona_scores) {
  if (spoof_scores.empty() || bona_scores.empty()) {
    throw DomainError("EER needs at least one spoof and one bona fide score");
  }
  std::vector<double> spoof(spoof_scores.begin(), spoof_scores.end());
  std::vector<double> bona(bona_scores.begin(), bona_scores.end());
  for (double s : spoof) {
    if (!std::isfinite(s)) throw DomainError("non-finite score");
  }
  for (double s : bona) {
    if (!std::isfinite(s)) throw DomainError("non-finite score");
  }
  std::sort(spoof.begin(), spoof.end());
  std::sort(bona.begin(), bona.end());

  std::vector<double> thresholds;
  thresholds.reserve(spoof.size() + bona.size());
  std::merge(spoof.begin(), spoof.end(), bona.begin(), bona.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const double ns = static_cast<double>(spoof.size());
  const double nb = static_cast<double>(bona.size());
  std::size_t spoof_below = 0;  // spoof scores < t
  std::size_t bona_below = 0;   // bona scores < t

  double prev_far = 1.0, prev_frr = 0.0, prev_t = thresholds.front();
  EerResult r;
  r.num_spoof = spoof.size();
  r.num_bona = bona.size();
  for (std::size_t k = 0; k <= thresholds.size(); ++k) {
    double far, frr, t;
    if (k < thresholds.size()) {
      t = thresholds[k];
      while (spoof_below < spoof.size() && spoof[spoof_below] < t) ++spoof_below;
      while (bona_below < bona.size() && bona[bona_below] < t) ++bona_below;
      far = static_cast<double>(bona.size() - bona_below) / nb;
      frr = static_cast<double>(spoof_below) / ns;
    } else {
      t = thresholds.back();
      far = 0.0;
      frr = 1.0;
    }
    const double diff = far - frr;
    if (diff == 0.0) {
      r.eer = far;
      r.threshold = t;
      return r;
    }
    if (diff < 0.0) {
      const double prev_diff = prev_far - prev_frr;
      const double alpha = prev_diff / (prev_diff - diff);
      r.eer = prev_far + alpha * (far - prev_far);
      r.threshold = prev_t + alpha * (t - prev_t);
      return r;
    }
    prev_far = far;
    prev_frr = frr;
    prev_t = t;
  }
  // Unreachable: the final point has FAR - miss = -1.
  r.eer = 0.5;
  return r;
}

EerResult compute_eer(std::span<const ScoreRecord> records) {
  std::vector<double> spoof, bona;
  for (const auto& rec : records) {
    if (!rec.label) throw InputError("score record '" + rec.file_id + "' has no label");
    (*rec.label == Label::kSpoof ? spoof : bona).push_back(rec.score);
  }
  if (spoof.empty() || bona.empty()) {
    throw DomainError("EER needs both classes; got " + std::to_string(spoof.size()) +
                      " spoof and " + std::to_string(bona.size()) + " bona fide");
  }
  return compute_eer(spoof, bona);
}

double accuracy_at_threshold(std::span<const ScoreRecord> records,
                             double threshold) {
  if (records.empty()) throw DomainError("accuracy of an empty record set");
  std::size_t correct = 0;
  for (const auto& rec : records) {
    if (!rec.label) throw InputError("score record '" + rec.file_id + "' has no label");
    if ((rec.score > threshold) == (*rec.label == Label::kSpoof)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

UnjoinableError::UnjoinableError(std::vector<std::string> ids)
    : InputError([&] {
        std::string msg = std::to_string(ids.size()) +
                          " score record(s) do not match any manifest entry:";
        for (std::size_t i = 0; i < ids.size() && i < 10; ++i) msg += " " + ids[i];
        if (ids.size() > 10) msg += " ...";
        return msg;
      }()),
      ids_(std::move(ids)) {}

std::vector<JoinedRecord> join_scores(std::span<const ScoreRecord> records,
                                      const Manifest& manifest) {
  std::unordered_map<std::string, const ManifestEntry*> by_recorded, by_original;
  for (const auto& e : manifest.entries) {
    if (!e.recorded_file.empty()) by_recorded.try_emplace(e.recorded_file, &e);
    by_original.try_emplace(e.original_file, &e);
  }
  std::vector<JoinedRecord> out;
  out.reserve(records.size());
  std::vector<std::string> missing;
  for (const auto& rec : records) {
    JoinedRecord j{rec, nullptr, false};
    if (auto it = by_recorded.find(rec.file_id); it != by_recorded.end()) {
      j.entry = it->second;
      j.recorded = true;
    } else if (auto it2 = by_original.find(rec.file_id); it2 != by_original.end()) {
      j.entry = it2->second;
    } else {
      missing.push_back(rec.file_id);
      continue;
    }
    if (!j.record.label) j.record.label = j.entry->label;
    out.push_back(std::move(j));
  }
  if (!missing.empty()) throw UnjoinableError(std::move(missing));
  return out;
}

std::map<std::string, GroupAccuracy> per_attack_accuracy(
    std::span<const JoinedRecord> joined, double threshold) {
  std::map<std::string, std::vector<ScoreRecord>> groups;
  for (const auto& j : joined) {
    // Group by the manifest's ground truth; a record's own label only decides
    // correctness.
    groups[j.entry->group()].push_back(j.record);
  }
  std::map<std::string, GroupAccuracy> out;
  for (const auto& [name, recs] : groups) {
    out[name] = {accuracy_at_threshold(recs, threshold), recs.size()};
  }
  return out;
}

std::map<std::string, GroupAccuracy> per_attack_accuracy(
    std::span<const ScoreRecord> records, const Manifest& manifest,
    double threshold) {
  const auto joined = join_scores(records, manifest);
  return per_attack_accuracy(joined, threshold);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("pearson: length mismatch");
  if (x.size() < 2) throw DomainError("pearson: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DomainError("pearson: correlation undefined for zero variance");
  }
  if (x.size() == 2) return sxy > 0.0 ? 1.0 : -1.0;
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

namespace {

Correlation correlate(const std::vector<std::pair<double, double>>& pairs) {
  Correlation c;
  c.pairs = pairs.size();
  c.two_point = pairs.size() == 2;
  if (pairs.size() < 2) {
    c.note = "fewer than 2 complete pairs";
    return c;
  }
  std::vector<double> x, y;
  for (const auto& [a, b] : pairs) {
    x.push_back(a);
    y.push_back(b);
  }
  try {
    c.r = pearson(x, y);
    if (c.two_point) c.note = "two points only; |r| is trivially 1";
  } catch (const DomainError& e) {
    c.note = e.what();
  }
  return c;
}

}  // namespace

CorrelationTriple quality_correlation(std::span<const SetupQuality> per_setup) {
  std::vector<std::pair<double, double>> acc_mos, acc_pesq, mos_pesq;
  for (const auto& s : per_setup) {
    if (s.mos) acc_mos.emplace_back(s.spoof_accuracy, *s.mos);
    if (s.pesq) acc_pesq.emplace_back(s.spoof_accuracy, *s.pesq);
    if (s.mos && s.pesq) mos_pesq.emplace_back(*s.mos, *s.pesq);
  }
  return {correlate(acc_mos), correlate(acc_pesq), correlate(mos_pesq)};
}

std::map<std::string, MeanStd> aggregate_trials(
    std::span<const TrialMetrics> trials) {
  std::map<std::string, std::vector<double>> values;
  for (const auto& t : trials) {
    for (const auto& [k, v] : t) values[k].push_back(v);
  }
  std::map<std::string, MeanStd> out;
  for (const auto& [k, vs] : values) {
    MeanStd m;
    m.n = vs.size();
    for (double v : vs) m.mean += v;
    m.mean /= static_cast<double>(vs.size());
    double ss = 0.0;
    for (double v : vs) ss += (v - m.mean) * (v - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(vs.size()));
    out[k] = m;
  }
  return out;
}

namespace {

double parse_number(const std::string& text, std::size_t line, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("invalid ") + what + " '" + text + "'");
  }
}

std::size_t require_column(const csv::Table& t, std::string_view name,
                           const std::filesystem::path& path) {
  const auto c = t.column(name);
  if (!c) {
    throw InputError(path.string() + ": missing column '" + std::string(name) + "'");
  }
  return *c;
}

}  // namespace

std::vector<ScoreRecord> read_scores(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::size_t id_col = require_column(t, "file_id", path);
  const std::size_t score_col = require_column(t, "score", path);
  const auto label_col = t.column("label");
  std::vector<ScoreRecord> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    try {
      ScoreRecord r;
      r.file_id = row.fields[id_col];
      r.score = parse_number(row.fields[score_col], row.line, "score");
      if (!std::isfinite(r.score)) throw ParseError(row.line, "score is not finite");
      if (label_col && !row.fields[*label_col].empty()) {
        r.label = parse_label(row.fields[*label_col]);
      }
      out.push_back(std::move(r));
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.detail(), path.string());
    } catch (const InputError& e) {
      throw ParseError(row.line, e.what(), path.string());
    }
  }
  return out;
}

void write_scores(const std::filesystem::path& path,
                  std::span<const ScoreRecord> records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "file_id,score,label\n";
  out.precision(17);
  for (const auto& r : records) {
    out << csv::escape(r.file_id) << ',' << r.score << ','
        << (r.label ? csv::escape(to_string(*r.label)) : std::string()) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::map<std::string, double> read_quality(const std::filesystem::path& path,
                                           QualityMeasure measure) {
  const csv::Table t = csv::read(path);
  const char* name = measure == QualityMeasure::kMos ? "mos" : "pesq";
  const double lo = measure == QualityMeasure::kMos ? 1.0 : -0.5;
  const double hi = measure == QualityMeasure::kMos ? 5.0 : 4.5;
  const std::size_t uid_col = require_column(t, "uid", path);
  const std::size_t value_col = require_column(t, name, path);
  std::map<std::string, double> out;
  for (const auto& row : t.rows) {
    const double v = parse_number(row.fields[value_col], row.line, name);
    if (!(v >= lo && v <= hi)) {
      throw ParseError(row.line, std::string(name) + " value out of range", path.string());
    }
    if (!out.emplace(row.fields[uid_col], v).second) {
      throw ParseError(row.line, "duplicate uid '" + row.fields[uid_col] + "'", path.string());
    }
  }
  return out;
}

std::map<std::string, ListenerAverage> average_listener_scores(
    const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::size_t uid_col = require_column(t, "uid", path);
  const std::size_t listener_col = require_column(t, "listener", path);
  const std::size_t score_col = require_column(t, "score", path);
  std::map<std::string, std::pair<double, std::size_t>> sums;
  std::map<std::string, std::set<std::string>> listeners;
  for (const auto& row : t.rows) {
    const double v = parse_number(row.fields[score_col], row.line, "score");
    if (!(v >= 1.0 && v <= 5.0)) {
      throw ParseError(row.line, "rating outside [1, 5]", path.string());
    }
    auto& s = sums[row.fields[uid_col]];
    s.first += v;
    ++s.second;
    listeners[row.fields[uid_col]].insert(row.fields[listener_col]);
  }
  std::map<std::string, ListenerAverage> out;
  for (const auto& [uid, s] : sums) {
    out[uid] = {s.first / static_cast<double>(s.second), s.second,
                listeners[uid].size()};
  }
  return out;
}

}  // namespace replaydf

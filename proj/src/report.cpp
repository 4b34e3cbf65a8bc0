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

#include "replaydf/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "replaydf/csv.hpp"

namespace replaydf {
namespace {

struct TrialOutcome {
  std::vector<ConditionResult> conditions;
  std::map<std::string, double> setup_accuracy;
  TrialMetrics metrics;
};

ConditionResult evaluate_condition(std::string name,
                                   const std::vector<JoinedRecord>& joined,
                                   double threshold) {
  ConditionResult c;
  c.name = std::move(name);
  c.count = joined.size();
  std::vector<ScoreRecord> records;
  records.reserve(joined.size());
  bool has_spoof = false, has_bona = false;
  for (const auto& j : joined) {
    records.push_back(j.record);
    (*j.record.label == Label::kSpoof ? has_spoof : has_bona) = true;
  }
  c.accuracy = accuracy_at_threshold(records, threshold);
  if (has_spoof && has_bona) c.eer = compute_eer(records);
  c.per_attack = per_attack_accuracy(joined, threshold);
  return c;
}

TrialOutcome evaluate_trial(std::span<const ScoreRecord> records,
                            const Manifest& manifest, double threshold) {
  const auto joined = join_scores(records, manifest);
  std::vector<JoinedRecord> baseline, recorded;
  for (const auto& j : joined) (j.recorded ? recorded : baseline).push_back(j);

  TrialOutcome out;
  for (auto* part : {&baseline, &recorded}) {
    if (part->empty()) continue;
    const std::string name(part == &baseline ? kBaselineCondition : kRecordedCondition);
    auto c = evaluate_condition(name, *part, threshold);
    out.metrics[name + ".accuracy"] = c.accuracy;
    if (c.eer) out.metrics[name + ".eer"] = c.eer->eer;
    for (const auto& [group, acc] : c.per_attack) {
      out.metrics[name + "." + group + ".accuracy"] = acc.accuracy;
    }
    out.conditions.push_back(std::move(c));
  }

  std::map<std::string, std::pair<std::size_t, std::size_t>> per_uid;  // correct, total
  for (const auto& j : recorded) {
    if (*j.record.label != Label::kSpoof) continue;
    auto& [correct, total] = per_uid[j.entry->uid];
    ++total;
    if (j.record.score > threshold) ++correct;
  }
  for (const auto& [uid, ct] : per_uid) {
    out.setup_accuracy[uid] =
        static_cast<double>(ct.first) / static_cast<double>(ct.second);
  }
  return out;
}

}  // namespace

EvalReport evaluate(std::span<const std::vector<ScoreRecord>> trials,
                    const Manifest& manifest, double threshold) {
  if (trials.empty()) throw InputError("evaluate: no score sets given");
  std::vector<TrialOutcome> outcomes;
  for (const auto& t : trials) {
    if (t.empty()) throw DomainError("evaluate: empty score set");
    outcomes.push_back(evaluate_trial(t, manifest, threshold));
  }

  EvalReport report;
  report.threshold = threshold;
  for (const auto& o : outcomes) report.trials.push_back(o.metrics);
  report.summary = aggregate_trials(report.trials);

  // Trial-averaged view; identical to the single trial when there is one.
  report.conditions = outcomes.front().conditions;
  for (auto& c : report.conditions) {
    if (outcomes.size() == 1) break;
    double acc = 0.0, eer = 0.0, thr = 0.0;
    std::size_t present = 0, eer_n = 0;
    std::map<std::string, double> groups;
    for (const auto& o : outcomes) {
      const auto it = std::find_if(o.conditions.begin(), o.conditions.end(),
                                   [&](const auto& x) { return x.name == c.name; });
      if (it == o.conditions.end()) continue;
      ++present;
      acc += it->accuracy;
      if (it->eer) {
        eer += it->eer->eer;
        thr += it->eer->threshold;
        ++eer_n;
      }
      for (const auto& [g, a] : it->per_attack) groups[g] += a.accuracy;
    }
    const double k = static_cast<double>(present);
    c.accuracy = acc / k;
    if (c.eer && eer_n > 0) {
      c.eer->eer = eer / static_cast<double>(eer_n);
      c.eer->threshold = thr / static_cast<double>(eer_n);
    }
    for (auto& [g, a] : c.per_attack) a.accuracy = groups[g] / k;
  }

  std::map<std::string, std::pair<double, std::size_t>> setup;
  for (const auto& o : outcomes) {
    for (const auto& [uid, acc] : o.setup_accuracy) {
      setup[uid].first += acc;
      ++setup[uid].second;
    }
  }
  for (const auto& [uid, s] : setup) {
    SetupQuality q;
    q.uid = uid;
    q.spoof_accuracy = s.first / static_cast<double>(s.second);
    report.per_setup.push_back(std::move(q));
  }
  return report;
}

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json correlation_json(const Correlation& c) {
  nlohmann::ordered_json j;
  j["r"] = optional_number(c.r);
  j["pairs"] = c.pairs;
  j["two_point"] = c.two_point;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const CorrelationTriple& c) {
  nlohmann::ordered_json j;
  j["acc_vs_mos"] = correlation_json(c.acc_vs_mos);
  j["acc_vs_pesq"] = correlation_json(c.acc_vs_pesq);
  j["mos_vs_pesq"] = correlation_json(c.mos_vs_pesq);
  return j;
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["threshold"] = report.threshold;
  nlohmann::ordered_json overall = nlohmann::ordered_json::object();
  nlohmann::ordered_json per_attack = nlohmann::ordered_json::object();
  for (const auto& c : report.conditions) {
    nlohmann::ordered_json o;
    o["count"] = c.count;
    o["accuracy"] = c.accuracy;
    if (c.eer) {
      o["eer"] = c.eer->eer;
      o["eer_threshold"] = c.eer->threshold;
      o["num_spoof"] = c.eer->num_spoof;
      o["num_bona"] = c.eer->num_bona;
    } else {
      o["eer"] = nullptr;
    }
    overall[c.name] = o;
    nlohmann::ordered_json groups = nlohmann::ordered_json::object();
    for (const auto& [g, a] : c.per_attack) {
      groups[g] = {{"accuracy", a.accuracy}, {"count", a.count}};
    }
    per_attack[c.name] = groups;
  }
  j["overall"] = overall;
  j["per_attack"] = per_attack;
  nlohmann::ordered_json setups = nlohmann::ordered_json::array();
  for (const auto& s : report.per_setup) {
    setups.push_back({{"uid", s.uid},
                      {"mos", optional_number(s.mos)},
                      {"pesq", optional_number(s.pesq)},
                      {"spoof_accuracy", s.spoof_accuracy}});
  }
  j["per_setup"] = setups;
  j["correlations"] = report.correlations ? to_json(*report.correlations)
                                          : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json trials = nlohmann::ordered_json::array();
  for (const auto& t : report.trials) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t) o[k] = v;
    trials.push_back(o);
  }
  j["trials"] = trials;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [k, m] : report.summary) {
    summary[k] = {{"mean", m.mean}, {"stddev", m.stddev}, {"n", m.n}};
  }
  j["summary"] = summary;
  return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  if (!j.is_object()) throw InputError("report is not a JSON object");
  r.threshold = j.value("threshold", 0.5);
  if (!j.contains("per_setup") || !j["per_setup"].is_array()) {
    throw InputError("report has no per_setup array");
  }
  for (const auto& s : j["per_setup"]) {
    SetupQuality q;
    try {
      q.uid = s.at("uid").get<std::string>();
      q.spoof_accuracy = s.at("spoof_accuracy").get<double>();
      if (s.contains("mos") && !s["mos"].is_null()) q.mos = s["mos"].get<double>();
      if (s.contains("pesq") && !s["pesq"].is_null()) q.pesq = s["pesq"].get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("malformed per_setup row: ") + e.what());
    }
    r.per_setup.push_back(std::move(q));
  }
  return r;
}

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string render_table(const EvalReport& report) {
  std::ostringstream out;
  out << "threshold " << report.threshold << "\n\n";
  out << pad("Condition", 12) << pad("N", 9) << pad("Accuracy (%)", 14) << "EER (%)\n";
  for (const auto& c : report.conditions) {
    out << pad(c.name, 12) << pad(std::to_string(c.count), 9)
        << pad(percent(c.accuracy), 14) << (c.eer ? percent(c.eer->eer) : "-") << '\n';
  }
  out << '\n' << pad("Attack", 12);
  for (const auto& c : report.conditions) out << pad(c.name, 12);
  out << '\n';
  std::vector<std::pair<std::string, std::string>> rows;
  for (Architecture a : kArchitectures) {
    rows.emplace_back(std::string(display_name(a)), std::string(to_string(a)));
  }
  rows.emplace_back(std::string(kBonaFideGroup), std::string(kBonaFideGroup));
  for (const auto& [label, key] : rows) {
    out << pad(label, 12);
    for (const auto& c : report.conditions) {
      const auto it = c.per_attack.find(key);
      out << pad(it == c.per_attack.end() ? "-" : percent(it->second.accuracy), 12);
    }
    out << '\n';
  }
  if (report.trials.size() > 1) {
    out << "\nover " << report.trials.size() << " trials (mean +- std)\n";
    for (const auto& [k, m] : report.summary) {
      out << pad(k, 34) << percent(m.mean) << " +- " << percent(m.stddev) << '\n';
    }
  }
  return out.str();
}

std::vector<ScatterPoint> scatter_points(std::span<const SetupQuality> per_setup) {
  std::vector<ScatterPoint> out;
  for (const auto& s : per_setup) {
    if (s.mos) out.push_back({s.uid, "mos", *s.mos, s.spoof_accuracy});
    if (s.pesq) out.push_back({s.uid, "pesq", *s.pesq, s.spoof_accuracy});
  }
  return out;
}

std::string render_scatter_csv(std::span<const ScatterPoint> points) {
  std::ostringstream out;
  out.precision(17);
  out << "uid,measure,quality,accuracy\n";
  for (const auto& p : points) {
    out << csv::escape(p.uid) << ',' << p.measure << ',' << p.quality << ','
        << p.accuracy << '\n';
  }
  return out.str();
}

std::string render_scatter_svg(std::span<const ScatterPoint> points,
                               const CorrelationTriple& correlations) {
  constexpr double kWidth = 640, kHeight = 420, kLeft = 60, kRight = 20,
                   kTop = 40, kBottom = 50;
  constexpr double kQualityMin = -0.5, kQualityMax = 5.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto x_of = [&](double q) {
    return kLeft + (std::clamp(q, kQualityMin, kQualityMax) - kQualityMin) /
                       (kQualityMax - kQualityMin) * plot_w;
  };
  auto y_of = [&](double a) { return kTop + (1.0 - std::clamp(a, 0.0, 1.0)) * plot_h; };
  auto r_text = [](const Correlation& c) {
    if (!c.r) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *c.r);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  for (int q = 0; q <= 5; ++q) {
    svg << "<text x=\"" << x_of(q) << "\" y=\"" << kTop + plot_h + 16
        << "\" text-anchor=\"middle\">" << q << "</text>\n";
  }
  for (int a = 0; a <= 100; a += 25) {
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y_of(a / 100.0) + 4
        << "\" text-anchor=\"end\">" << a << "%</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">recording quality (MOS / PESQ)</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kTop + plot_h / 2
      << ")\">spoof detection accuracy</text>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"22\">"
      << "<tspan fill=\"#1f77b4\">MOS r=" << r_text(correlations.acc_vs_mos)
      << "</tspan>  <tspan fill=\"#2ca02c\">PESQ r=" << r_text(correlations.acc_vs_pesq)
      << "</tspan>  MOS-PESQ r=" << r_text(correlations.mos_vs_pesq) << "</text>\n";
  for (const auto& p : points) {
    const char* colour = p.measure == "mos" ? "#1f77b4" : "#2ca02c";
    svg << "<circle cx=\"" << x_of(p.quality) << "\" cy=\"" << y_of(p.accuracy)
        << "\" r=\"4\" fill=\"" << colour << "\" fill-opacity=\"0.7\"><title>"
        << xml_escape(p.uid) << "</title></circle>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace replaydf

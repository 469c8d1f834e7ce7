// Copyright 2026 The MetaFidelity Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/report_json.h"

#include <array>
#include <charconv>

#include "metafidelity/version.h"

namespace metafidelity::cli {
namespace {

using nlohmann::json;

json Metadata(const std::vector<InputDigest>& inputs) {
  json digests = json::object();
  for (const InputDigest& d : inputs) digests[d.role + "_sha256"] = d.sha256;
  return {{"tool", kToolName}, {"version", kVersion}, {"inputs", digests}};
}

json RateJson(const MrOutcome& outcome) {
  return {{"hold_rate", outcome.hold_rate},
          {"violation_rate", outcome.violation_rate},
          {"support", outcome.support}};
}

// Ids of samples whose flag is 0.
json FailedIds(const std::vector<std::string>& ids,
               const std::vector<double>& flags,
               const std::vector<std::size_t>* members = nullptr) {
  json out = json::array();
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i] == 1.0) continue;
    out.push_back(ids[members ? (*members)[i] : i]);
  }
  return out;
}

json ProfileJson(const CalibrationProfile& profile) {
  json bins = json::array();
  for (const CalibrationBin& bin : profile.bins) {
    json entry = {{"lower", bin.lower}, {"upper", bin.upper}, {"count", bin.count}};
    if (bin.count > 0) {
      entry["teacher_accuracy"] = bin.teacher_accuracy;
      entry["student_accuracy"] = bin.student_accuracy;
    } else {
      entry["teacher_accuracy"] = nullptr;
      entry["student_accuracy"] = nullptr;
    }
    bins.push_back(std::move(entry));
  }
  return bins;
}

}  // namespace

json FidelityReportToJson(const FidelityReport& report,
                          const std::vector<InputDigest>& inputs,
                          const PairingResult& pairing, bool lenient) {
  json doc;
  json metadata = Metadata(inputs);
  metadata["config"] = {
      {"delta", report.config.delta},
      {"temperature", report.config.temperature},
      {"prob_floor", report.config.prob_floor},
      {"tau", report.options.taus},
      {"bins", report.options.bin_counts},
      {"eca_threshold", report.options.eca_threshold},
      {"eca_mode", report.options.eca_mode == EcaMode::kAllBins ? "all-bins"
                                                                : "occupied-bins"},
      {"lenient", lenient},
  };
  metadata["pairing"] = {
      {"paired", pairing.dataset.size()},
      {"num_classes", pairing.dataset.num_classes()},
      {"dropped_teacher_ids", pairing.dropped_teacher_ids},
      {"dropped_student_ids", pairing.dropped_student_ids},
  };
  metadata["conventions"] = {
      {"log_base", "e"},
      {"argmax_ties", "lowest-index"},
      {"mr2_direction", "KL(teacher||student)"},
      {"mr4_binning", "teacher-confidence"},
  };
  doc["metadata"] = std::move(metadata);

  json mr1 = RateJson(report.mr1);
  mr1["disagreeing_ids"] = FailedIds(report.ids, report.mr1.per_sample);
  doc["mr1"] = std::move(mr1);

  json mr2 = RateJson(report.mr2);
  mr2["delta"] = report.config.delta;
  json violating = json::array();
  for (std::size_t i = 0; i < report.mr2.per_sample.size(); ++i) {
    if (!(report.mr2.per_sample[i] <= report.config.delta)) {
      violating.push_back(report.ids[i]);
    }
  }
  mr2["violating_ids"] = std::move(violating);
  doc["mr2"] = std::move(mr2);

  json mr3 = json::array();
  for (const TauResult& r : report.mr3) {
    json entry = {{"tau", r.tau}};
    if (r.outcome) {
      entry.update(RateJson(*r.outcome));
      entry["status"] = "defined";
      entry["violating_ids"] =
          FailedIds(report.ids, r.outcome->per_sample, &r.outcome->members);
    } else {
      entry["status"] = "undefined";
      entry["reason"] = "EmptyConfidenceSubset";
    }
    mr3.push_back(std::move(entry));
  }
  doc["mr3"] = std::move(mr3);

  json mr4 = json::array();
  for (const BinResult& r : report.mr4) {
    mr4.push_back({{"bins", r.bins},
                   {"eca", r.outcome.hold_rate},
                   {"support", r.outcome.support},
                   {"profile", ProfileJson(*r.outcome.calibration)}});
  }
  doc["mr4"] = std::move(mr4);

  doc["per_sample_kl"] = {
      {"id", report.ids},
      {"kl_pq", report.mr2.per_sample},
      {"kl_qp", report.mr2.per_sample_reverse},
  };
  doc["verdict"] = {{"behavior_preserving", report.behavior_preserving}};

  json warnings = json::array();
  if (!pairing.dropped_teacher_ids.empty() ||
      !pairing.dropped_student_ids.empty()) {
    warnings.push_back("dropped " +
                       std::to_string(pairing.dropped_teacher_ids.size()) +
                       " teacher-only and " +
                       std::to_string(pairing.dropped_student_ids.size()) +
                       " student-only ids");
  }
  for (const std::string& w : report.warnings) warnings.push_back(w);
  doc["warnings"] = std::move(warnings);
  return doc;
}

json QualityReportToJson(const QualityReport& report,
                         const std::vector<InputDigest>& inputs) {
  json doc;
  doc["metadata"] = Metadata(inputs);

  json metrics = {{"icr", report.icr}, {"tcr", report.tcr}};
  if (report.aed) metrics["aed"] = *report.aed;
  if (report.acs) metrics["acs"] = *report.acs;
  if (report.asr) metrics["asr"] = *report.asr;
  doc["metrics"] = std::move(metrics);

  json rows = json::array();
  for (const PairQuality& q : report.per_pair) {
    json row = {
        {"id", q.id},
        {"identifiers", q.identifiers},
        {"identifiers_changed", q.identifiers_changed},
        {"original_tokens", q.original_tokens},
        {"modified_tokens", q.modified_tokens},
        {"substitutions", q.substitutions},
        {"edit_distance_sum", q.edit_distance_sum},
    };
    if (q.cosine) row["cosine"] = *q.cosine;
    rows.push_back(std::move(row));
  }
  doc["per_pair"] = std::move(rows);
  doc["warnings"] = report.warnings;
  return doc;
}

std::string Serialize(const json& doc) { return doc.dump(2) + "\n"; }

std::string FormatShortest(double value) {
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), end);
}

}  // namespace metafidelity::cli

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

#include "metafidelity/core_model.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include <json.hpp>

#include "metafidelity/error.h"

namespace metafidelity {
namespace {

using nlohmann::json;

std::vector<double> NumberArray(const json& value, const char* field) {
  if (!value.is_array()) {
    throw Error(ErrorCode::kInvalidField,
                std::string("field \"") + field + "\" must be an array");
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const json& v : value) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kInvalidField,
                  std::string("field \"") + field +
                      "\" must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

json ParseObject(std::string_view line) {
  json doc = json::parse(line.begin(), line.end(), nullptr,
                         /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::kParse, "malformed JSON");
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParse, "expected a JSON object");
  }
  return doc;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

// Re-throws `e` with the line number attached.
[[noreturn]] void RethrowAtLine(const Error& e, std::size_t line) {
  throw Error(e.code(), "line " + std::to_string(line) + ": " + e.what(),
              line);
}

}  // namespace

PredictionRecord PredictionRecord::Create(std::string id,
                                          std::vector<double> scores,
                                          ScoreKind kind, std::size_t label) {
  if (scores.size() < 2) {
    throw Error(ErrorCode::kInvalidField,
                "record \"" + id + "\" needs at least two class scores");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNonFinite,
                  "record \"" + id + "\" has a non-finite score");
    }
  }
  if (label >= scores.size()) {
    throw Error(ErrorCode::kLabelOutOfRange,
                "record \"" + id + "\" has label " + std::to_string(label) +
                    " but only " + std::to_string(scores.size()) +
                    " classes");
  }
  if (kind == ScoreKind::kProbabilities) {
    double sum = 0.0;
    for (double p : scores) {
      if (p < 0.0 || p > 1.0) {
        throw Error(ErrorCode::kNotASimplex,
                    "record \"" + id + "\" has a probability outside [0, 1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
      throw Error(ErrorCode::kNotASimplex,
                  "record \"" + id + "\" probabilities sum to " +
                      std::to_string(sum));
    }
  }
  return PredictionRecord(std::move(id), std::move(scores), kind, label);
}

ProbabilityVector PredictionRecord::Distribution(double temperature) const {
  if (kind_ == ScoreKind::kLogits) {
    return ProbabilityVector::Normalize(Softmax(scores_, temperature));
  }
  return ProbabilityVector::Normalize(scores_);
}

RawRecord ParseRawRecord(std::string_view line) {
  const json doc = ParseObject(line);
  RawRecord raw;
  for (const auto& [key, value] : doc.items()) {
    if (key == "id") {
      if (!value.is_string()) {
        throw Error(ErrorCode::kInvalidField, "field \"id\" must be a string");
      }
      raw.id = value.get<std::string>();
    } else if (key == "label") {
      if (value.is_number_unsigned()) {
        const auto label = value.get<std::uint64_t>();
        if (label > static_cast<std::uint64_t>(INT64_MAX)) {
          throw Error(ErrorCode::kLabelOutOfRange, "label is too large");
        }
        raw.label = static_cast<std::int64_t>(label);
      } else if (value.is_number_integer()) {
        raw.label = value.get<std::int64_t>();
      } else {
        throw Error(ErrorCode::kInvalidField,
                    "field \"label\" must be an integer");
      }
    } else if (key == "logits") {
      raw.logits = NumberArray(value, "logits");
    } else if (key == "probs") {
      raw.probs = NumberArray(value, "probs");
    } else {
      raw.extra_fields.push_back(key);
    }
  }
  return raw;
}

PredictionRecord ValidateRecord(const RawRecord& raw, bool lenient) {
  if (!raw.id) throw Error(ErrorCode::kMissingField, "missing field \"id\"");
  if (!raw.label) {
    throw Error(ErrorCode::kMissingField, "missing field \"label\"");
  }
  if (raw.logits && raw.probs) {
    throw Error(ErrorCode::kBothScoreKinds,
                "record has both \"logits\" and \"probs\"");
  }
  if (!raw.logits && !raw.probs) {
    throw Error(ErrorCode::kMissingField,
                "record needs \"logits\" or \"probs\"");
  }
  if (!lenient && !raw.extra_fields.empty()) {
    throw Error(ErrorCode::kUnknownField,
                "unknown field \"" + raw.extra_fields.front() + "\"");
  }
  if (*raw.label < 0) {
    throw Error(ErrorCode::kLabelOutOfRange, "label must be non-negative");
  }
  const bool has_logits = raw.logits.has_value();
  return PredictionRecord::Create(
      *raw.id, has_logits ? *raw.logits : *raw.probs,
      has_logits ? ScoreKind::kLogits : ScoreKind::kProbabilities,
      static_cast<std::size_t>(*raw.label));
}

std::vector<PredictionRecord> ReadPredictionDump(std::istream& in,
                                                 bool lenient) {
  std::vector<PredictionRecord> records;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    try {
      PredictionRecord record = ValidateRecord(ParseRawRecord(line), lenient);
      if (!seen.insert(record.id()).second) {
        throw Error(ErrorCode::kDuplicateId,
                    "duplicate id \"" + record.id() + "\"");
      }
      records.push_back(std::move(record));
    } catch (const Error& e) {
      RethrowAtLine(e, line_number);
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read error");
  return records;
}

PairedDataset PairedDataset::Create(std::vector<PairedSample> samples) {
  if (samples.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "paired dataset is empty");
  }
  std::sort(samples.begin(), samples.end(),
            [](const PairedSample& a, const PairedSample& b) {
              return a.id < b.id;
            });
  const std::size_t num_classes = samples.front().teacher.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const PairedSample& s = samples[i];
    if (i > 0 && samples[i - 1].id == s.id) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id \"" + s.id + "\"");
    }
    if (s.teacher.size() != num_classes || s.student.size() != num_classes) {
      throw Error(ErrorCode::kClassCountMismatch,
                  "sample \"" + s.id + "\" does not have " +
                      std::to_string(num_classes) + " classes");
    }
    if (s.label >= num_classes) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "sample \"" + s.id + "\" label out of range");
    }
  }
  return PairedDataset(std::move(samples), num_classes);
}

IdJoin JoinById(std::span<const PredictionRecord> left,
                std::span<const PredictionRecord> right) {
  std::map<std::string_view, std::size_t> right_index;
  for (std::size_t j = 0; j < right.size(); ++j) {
    right_index.emplace(right[j].id(), j);
  }
  std::map<std::string_view, std::size_t> left_index;
  for (std::size_t i = 0; i < left.size(); ++i) {
    left_index.emplace(left[i].id(), i);
  }

  IdJoin join;
  for (const auto& [id, i] : left_index) {
    const auto it = right_index.find(id);
    if (it == right_index.end()) {
      join.left_only.emplace_back(id);
      continue;
    }
    const PredictionRecord& a = left[i];
    const PredictionRecord& b = right[it->second];
    if (a.label() != b.label()) {
      throw Error(ErrorCode::kLabelMismatch,
                  "id \"" + a.id() + "\" has label " +
                      std::to_string(a.label()) + " vs " +
                      std::to_string(b.label()));
    }
    if (a.num_classes() != b.num_classes()) {
      throw Error(ErrorCode::kClassCountMismatch,
                  "id \"" + a.id() + "\" has " +
                      std::to_string(a.num_classes()) + " vs " +
                      std::to_string(b.num_classes()) + " classes");
    }
    join.matched.emplace_back(i, it->second);
  }
  for (const auto& [id, j] : right_index) {
    if (!left_index.contains(id)) join.right_only.emplace_back(id);
  }
  return join;
}

PairingResult PairDatasets(std::span<const PredictionRecord> teacher,
                           std::span<const PredictionRecord> student,
                           double temperature) {
  IdJoin join = JoinById(teacher, student);
  if (join.matched.empty()) {
    throw Error(ErrorCode::kEmptyIntersection,
                "teacher and student dumps share no ids");
  }
  std::vector<PairedSample> samples;
  samples.reserve(join.matched.size());
  const std::size_t num_classes = teacher[join.matched.front().first].num_classes();
  for (const auto& [i, j] : join.matched) {
    const PredictionRecord& t = teacher[i];
    if (t.num_classes() != num_classes) {
      throw Error(ErrorCode::kClassCountMismatch,
                  "id \"" + t.id() + "\" has " +
                      std::to_string(t.num_classes()) + " classes, expected " +
                      std::to_string(num_classes));
    }
    samples.push_back(PairedSample{t.id(), t.Distribution(temperature),
                                   student[j].Distribution(temperature),
                                   t.label()});
  }
  return PairingResult{PairedDataset::Create(std::move(samples)),
                       std::move(join.left_only), std::move(join.right_only)};
}

void WritePairedDataset(std::ostream& out, const PairedDataset& dataset) {
  for (const PairedSample& s : dataset.samples()) {
    json line = {
        {"id", s.id},
        {"label", s.label},
        {"teacher", std::vector<double>(s.teacher.values().begin(),
                                        s.teacher.values().end())},
        {"student", std::vector<double>(s.student.values().begin(),
                                        s.student.values().end())},
    };
    out << line.dump() << '\n';
  }
}

PairedDataset ReadPairedDataset(std::istream& in) {
  std::vector<PairedSample> samples;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    try {
      const json doc = ParseObject(line);
      for (const char* field : {"id", "label", "teacher", "student"}) {
        if (!doc.contains(field)) {
          throw Error(ErrorCode::kMissingField,
                      std::string("missing field \"") + field + "\"");
        }
      }
      if (!doc["id"].is_string() || !doc["label"].is_number_unsigned()) {
        throw Error(ErrorCode::kInvalidField, "bad id or label");
      }
      samples.push_back(PairedSample{
          doc["id"].get<std::string>(),
          ProbabilityVector::FromNormalized(NumberArray(doc["teacher"], "teacher")),
          ProbabilityVector::FromNormalized(NumberArray(doc["student"], "student")),
          doc["label"].get<std::size_t>()});
    } catch (const Error& e) {
      RethrowAtLine(e, line_number);
    }
  }
  return PairedDataset::Create(std::move(samples));
}

void FidelityConfig::Validate() const {
  if (!(delta >= 0.0) || std::isnan(delta)) {
    throw Error(ErrorCode::kInvalidConfig, "delta must be >= 0");
  }
  if (!(tau > 0.5 && tau <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tau must lie in (0.5, 1]");
  }
  if (bins == 0) {
    throw Error(ErrorCode::kInvalidConfig, "bins must be positive");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidConfig, "temperature must be positive");
  }
  if (!(prob_floor > 0.0 && prob_floor < 0.5)) {
    throw Error(ErrorCode::kInvalidConfig, "prob_floor must lie in (0, 0.5)");
  }
}

}  // namespace metafidelity

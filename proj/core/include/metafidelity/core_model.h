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

// Prediction records, their NDJSON ingestion, and the id-keyed pairing of a
// teacher dump with a student dump.
//
// Dump format: one JSON object per line with exactly the fields "id"
// (string), "label" (non-negative integer) and one of "logits" or "probs"
// (array of numbers). Unknown fields are rejected unless lenient.

#ifndef METAFIDELITY_CORE_MODEL_H_
#define METAFIDELITY_CORE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metafidelity/divergence.h"

namespace metafidelity {

inline constexpr double kSimplexTolerance = 1e-6;

enum class ScoreKind { kLogits, kProbabilities };

// One model's output for one sample.
class PredictionRecord {
 public:
  // Validates and builds a record. Throws kInvalidField (fewer than two
  // scores), kNonFinite, kLabelOutOfRange or kNotASimplex.
  static PredictionRecord Create(std::string id, std::vector<double> scores,
                                 ScoreKind kind, std::size_t label);

  const std::string& id() const { return id_; }
  std::span<const double> scores() const { return scores_; }
  ScoreKind kind() const { return kind_; }
  std::size_t label() const { return label_; }
  std::size_t num_classes() const { return scores_.size(); }

  // Class distribution: softmax(scores / T) for logits, the renormalized
  // scores for probabilities (temperature is ignored there).
  ProbabilityVector Distribution(double temperature = 1.0) const;

 private:
  PredictionRecord(std::string id, std::vector<double> scores, ScoreKind kind,
                   std::size_t label)
      : id_(std::move(id)), scores_(std::move(scores)), kind_(kind),
        label_(label) {}

  std::string id_;
  std::vector<double> scores_;
  ScoreKind kind_;
  std::size_t label_;
};

// A dump line after JSON parsing but before any semantic check.
struct RawRecord {
  std::optional<std::string> id;
  std::optional<std::vector<double>> logits;
  std::optional<std::vector<double>> probs;
  std::optional<std::int64_t> label;
  std::vector<std::string> extra_fields;
};

// Parses one NDJSON line. Throws kParse for malformed JSON and kInvalidField
// when a known field has the wrong JSON type.
RawRecord ParseRawRecord(std::string_view line);

// Throws kMissingField, kBothScoreKinds, kUnknownField (strict mode only),
// plus everything PredictionRecord::Create throws.
PredictionRecord ValidateRecord(const RawRecord& raw, bool lenient = false);

// Reads a whole dump. Blank lines are skipped. Errors carry the 1-based line
// number; a repeated id is kDuplicateId.
std::vector<PredictionRecord> ReadPredictionDump(std::istream& in,
                                                 bool lenient = false);

struct PairedSample {
  std::string id;
  ProbabilityVector teacher;
  ProbabilityVector student;
  std::size_t label;
};

// Samples sorted ascending by id, ids unique, one class count throughout.
class PairedDataset {
 public:
  // Sorts by id and checks the invariants. Throws kDuplicateId,
  // kClassCountMismatch, kLabelOutOfRange or kEmptyDataset.
  static PairedDataset Create(std::vector<PairedSample> samples);

  std::span<const PairedSample> samples() const { return samples_; }
  const PairedSample& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }
  std::size_t num_classes() const { return num_classes_; }

 private:
  PairedDataset(std::vector<PairedSample> samples, std::size_t num_classes)
      : samples_(std::move(samples)), num_classes_(num_classes) {}

  std::vector<PairedSample> samples_;
  std::size_t num_classes_;
};

// Index pairs of records sharing an id, sorted by id, plus the ids only one
// side carries.
struct IdJoin {
  std::vector<std::pair<std::size_t, std::size_t>> matched;
  std::vector<std::string> left_only;
  std::vector<std::string> right_only;
};

// Joins two dumps on id. Throws kLabelMismatch when a shared id carries
// different labels and kClassCountMismatch when the score lengths differ.
IdJoin JoinById(std::span<const PredictionRecord> left,
                std::span<const PredictionRecord> right);

struct PairingResult {
  PairedDataset dataset;
  std::vector<std::string> dropped_teacher_ids;
  std::vector<std::string> dropped_student_ids;
};

// Pairs teacher and student outputs on id. Logits go through
// softmax(. / temperature). Unmatched ids are dropped and reported.
// Throws kEmptyIntersection when no id is shared.
PairingResult PairDatasets(std::span<const PredictionRecord> teacher,
                           std::span<const PredictionRecord> student,
                           double temperature = 1.0);

// NDJSON with "id", "label", "teacher", "student" per line. Values use the
// shortest round-trip representation, so reading back is bit-exact.
void WritePairedDataset(std::ostream& out, const PairedDataset& dataset);
PairedDataset ReadPairedDataset(std::istream& in);

// Free parameters of the fidelity relations.
struct FidelityConfig {
  double delta = 0.5;        // KL tolerance for MR2
  double tau = 0.9;          // confidence threshold for MR3
  std::size_t bins = 10;     // calibration bins for MR4
  double temperature = 1.0;  // softmax temperature applied to logits
  double prob_floor = kDefaultProbFloor;

  // Throws kInvalidConfig naming the first offending field.
  void Validate() const;
};

}  // namespace metafidelity

#endif  // METAFIDELITY_CORE_MODEL_H_

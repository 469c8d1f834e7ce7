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

// Output-based metamorphic relations between a teacher and a student:
//
//   MR1  label loyalty          argmax S(x) == argmax T(x)
//   MR2  probability loyalty    KL(T(x) || S(x)) <= delta
//   MR3  high-confidence agreement over {x : max T(x) >= tau}
//   MR4  calibration alignment  mean |acc_T - acc_S| over B teacher-confidence bins
//
// MR1-MR3 report a hold rate and its complement, the violation rate. MR4
// reports the alignment score ECA (lower is better) in both fields.

#ifndef METAFIDELITY_FIDELITY_H_
#define METAFIDELITY_FIDELITY_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metafidelity/core_model.h"

namespace metafidelity {

enum class MrId { kMr1, kMr2, kMr3, kMr4 };

std::string_view MrName(MrId id);

// How MR4 averages bin differences.
enum class EcaMode {
  kAllBins,       // divide by B; empty bins contribute 0
  kOccupiedBins,  // divide by the number of non-empty bins
};

struct CalibrationBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  // Only meaningful when count > 0.
  double teacher_accuracy = 0.0;
  double student_accuracy = 0.0;
};

struct CalibrationProfile {
  std::vector<CalibrationBin> bins;
};

struct MrOutcome {
  MrId mr = MrId::kMr1;
  double hold_rate = 0.0;
  double violation_rate = 0.0;
  std::size_t support = 0;
  // Dataset-order diagnostics:
  //   MR1  1/0 agreement flag per sample
  //   MR2  KL(T || S) per sample; per_sample_reverse holds KL(S || T)
  //   MR3  1/0 flag per member of the confident subset (see `members`)
  //   MR4  bin index per sample
  std::vector<double> per_sample;
  std::vector<double> per_sample_reverse;
  std::vector<std::size_t> members;
  std::optional<CalibrationProfile> calibration;
};

// Returns 1 - hold_rate. Throws kOutOfRange outside [0, 1].
double ViolationRate(double hold_rate);

// Bin of a confidence value: [i/B, (i+1)/B), the last bin closed at 1.
std::size_t ConfidenceBin(double confidence, std::size_t bins);

// `threads` caps the fan-out of the per-sample loops; 0 means hardware
// concurrency. Results do not depend on it.
MrOutcome LabelLoyalty(const PairedDataset& data, std::size_t threads = 1);
MrOutcome ProbabilityLoyalty(const PairedDataset& data, double delta,
                             double prob_floor = kDefaultProbFloor,
                             std::size_t threads = 1);
// Throws kInvalidTau outside (0.5, 1] and kEmptyConfidenceSubset when the
// teacher never reaches tau.
MrOutcome HighConfidenceAgreement(const PairedDataset& data, double tau,
                                  std::size_t threads = 1);
MrOutcome CalibrationAlignment(const PairedDataset& data, std::size_t bins,
                               EcaMode mode = EcaMode::kAllBins);

struct EvaluationOptions {
  std::vector<double> taus = {0.8, 0.85, 0.9};
  std::vector<std::size_t> bin_counts = {10, 15, 20};
  double eca_threshold = 0.05;
  EcaMode eca_mode = EcaMode::kAllBins;
  std::size_t threads = 1;
};

struct TauResult {
  double tau = 0.0;
  // Empty when the confident subset is empty.
  std::optional<MrOutcome> outcome;
};

struct BinResult {
  std::size_t bins = 0;
  MrOutcome outcome;
};

struct FidelityReport {
  FidelityConfig config;
  EvaluationOptions options;
  std::vector<std::string> ids;
  MrOutcome mr1;
  MrOutcome mr2;
  std::vector<TauResult> mr3;
  std::vector<BinResult> mr4;
  bool behavior_preserving = false;
  std::vector<std::string> warnings;
};

// Runs all four relations. MR3 is evaluated for every entry of
// options.taus and MR4 for every entry of options.bin_counts; an empty
// confident subset is recorded as undefined rather than failing. The
// student counts as behavior-preserving when MR1-MR3 all hold everywhere
// and every ECA is at most options.eca_threshold.
FidelityReport EvaluateAll(const PairedDataset& data,
                           const FidelityConfig& config,
                           const EvaluationOptions& options = {});

}  // namespace metafidelity

#endif  // METAFIDELITY_FIDELITY_H_

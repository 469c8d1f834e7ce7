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

#include "metafidelity/fidelity.h"

#include <cmath>
#include <sstream>

#include "metafidelity/error.h"
#include "metafidelity/parallel.h"

namespace metafidelity {
namespace {

void RequireNonEmpty(const PairedDataset& data) {
  if (data.size() == 0) {
    throw Error(ErrorCode::kEmptyDataset, "dataset is empty");
  }
}

double Fraction(std::size_t count, std::size_t total) {
  return static_cast<double>(count) / static_cast<double>(total);
}

std::size_t CountOnes(const std::vector<double>& flags) {
  std::size_t n = 0;
  for (double f : flags) n += f == 1.0 ? 1 : 0;
  return n;
}

MrOutcome RateOutcome(MrId mr, std::size_t holds, std::size_t support) {
  MrOutcome out;
  out.mr = mr;
  out.support = support;
  out.hold_rate = Fraction(holds, support);
  out.violation_rate = ViolationRate(out.hold_rate);
  return out;
}

bool TeacherCorrect(const PairedSample& s) {
  return ArgMax(s.teacher.values()) == s.label;
}

bool StudentCorrect(const PairedSample& s) {
  return ArgMax(s.student.values()) == s.label;
}

std::string FormatTau(double tau) {
  std::ostringstream os;
  os << tau;
  return os.str();
}

}  // namespace

std::string_view MrName(MrId id) {
  switch (id) {
    case MrId::kMr1: return "MR1";
    case MrId::kMr2: return "MR2";
    case MrId::kMr3: return "MR3";
    case MrId::kMr4: return "MR4";
  }
  return "MR?";
}

double ViolationRate(double hold_rate) {
  if (!(hold_rate >= 0.0 && hold_rate <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "hold rate must lie in [0, 1]");
  }
  return 1.0 - hold_rate;
}

std::size_t ConfidenceBin(double confidence, std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::kZeroBins, "bin count must be positive");
  if (confidence >= 1.0) return bins - 1;
  if (confidence <= 0.0) return 0;
  const double b = static_cast<double>(bins);
  auto idx = std::min(static_cast<std::size_t>(confidence * b), bins - 1);
  // The product can land one bin off near a boundary; settle against the
  // same i/B bounds the profile reports.
  while (idx > 0 && confidence < static_cast<double>(idx) / b) --idx;
  while (idx + 1 < bins && confidence >= static_cast<double>(idx + 1) / b) ++idx;
  return idx;
}

MrOutcome LabelLoyalty(const PairedDataset& data, std::size_t threads) {
  RequireNonEmpty(data);
  std::vector<double> agree(data.size());
  ParallelFor(data.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const PairedSample& s = data[i];
      agree[i] = ArgMax(s.teacher.values()) == ArgMax(s.student.values());
    }
  });
  MrOutcome out = RateOutcome(MrId::kMr1, CountOnes(agree), data.size());
  out.per_sample = std::move(agree);
  return out;
}

MrOutcome ProbabilityLoyalty(const PairedDataset& data, double delta,
                             double prob_floor, std::size_t threads) {
  RequireNonEmpty(data);
  if (!(delta >= 0.0)) {
    throw Error(ErrorCode::kNegativeDelta, "delta must be >= 0");
  }
  std::vector<double> forward(data.size());
  std::vector<double> reverse(data.size());
  ParallelFor(data.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const PairedSample& s = data[i];
      forward[i] = KlDivergence(s.teacher, s.student, prob_floor);
      reverse[i] = KlDivergence(s.student, s.teacher, prob_floor);
    }
  });
  std::size_t holds = 0;
  for (double kl : forward) holds += kl <= delta ? 1 : 0;
  MrOutcome out = RateOutcome(MrId::kMr2, holds, data.size());
  out.per_sample = std::move(forward);
  out.per_sample_reverse = std::move(reverse);
  return out;
}

MrOutcome HighConfidenceAgreement(const PairedDataset& data, double tau,
                                  std::size_t threads) {
  if (!(tau > 0.5 && tau <= 1.0)) {
    throw Error(ErrorCode::kInvalidTau, "tau must lie in (0.5, 1]");
  }
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (MaxValue(data[i].teacher.values()) >= tau) members.push_back(i);
  }
  if (members.empty()) {
    throw Error(ErrorCode::kEmptyConfidenceSubset,
                "teacher never reaches confidence " + FormatTau(tau));
  }
  std::vector<double> flags(members.size());
  ParallelFor(members.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const PairedSample& s = data[members[m]];
      const std::size_t student_top = ArgMax(s.student.values());
      flags[m] = student_top == ArgMax(s.teacher.values()) &&
                 s.student[student_top] >= tau;
    }
  });
  MrOutcome out = RateOutcome(MrId::kMr3, CountOnes(flags), members.size());
  out.per_sample = std::move(flags);
  out.members = std::move(members);
  return out;
}

MrOutcome CalibrationAlignment(const PairedDataset& data, std::size_t bins,
                               EcaMode mode) {
  RequireNonEmpty(data);
  if (bins == 0) throw Error(ErrorCode::kZeroBins, "bin count must be positive");

  CalibrationProfile profile;
  profile.bins.resize(bins);
  std::vector<std::size_t> teacher_hits(bins, 0);
  std::vector<std::size_t> student_hits(bins, 0);
  const double b = static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    profile.bins[i].lower = static_cast<double>(i) / b;
    profile.bins[i].upper = static_cast<double>(i + 1) / b;
  }

  MrOutcome out;
  out.mr = MrId::kMr4;
  out.per_sample.reserve(data.size());
  for (const PairedSample& s : data.samples()) {
    const std::size_t bin = ConfidenceBin(MaxValue(s.teacher.values()), bins);
    out.per_sample.push_back(static_cast<double>(bin));
    ++profile.bins[bin].count;
    teacher_hits[bin] += TeacherCorrect(s) ? 1 : 0;
    student_hits[bin] += StudentCorrect(s) ? 1 : 0;
  }

  double total = 0.0;
  std::size_t occupied = 0;
  for (std::size_t i = 0; i < bins; ++i) {
    CalibrationBin& bin = profile.bins[i];
    if (bin.count == 0) continue;
    ++occupied;
    bin.teacher_accuracy = Fraction(teacher_hits[i], bin.count);
    bin.student_accuracy = Fraction(student_hits[i], bin.count);
    total += std::abs(bin.teacher_accuracy - bin.student_accuracy);
  }
  const double divisor =
      mode == EcaMode::kAllBins ? b : static_cast<double>(occupied);
  const double eca = total / divisor;

  out.hold_rate = eca;
  out.violation_rate = eca;
  out.support = data.size();
  out.calibration = std::move(profile);
  return out;
}

FidelityReport EvaluateAll(const PairedDataset& data,
                           const FidelityConfig& config,
                           const EvaluationOptions& options) {
  config.Validate();
  RequireNonEmpty(data);

  FidelityReport report;
  report.config = config;
  report.options = options;
  if (report.options.taus.empty()) report.options.taus = {config.tau};
  if (report.options.bin_counts.empty()) {
    report.options.bin_counts = {config.bins};
  }
  const std::size_t threads = options.threads;

  report.ids.reserve(data.size());
  for (const PairedSample& s : data.samples()) report.ids.push_back(s.id);

  report.mr1 = LabelLoyalty(data, threads);
  report.mr2 = ProbabilityLoyalty(data, config.delta, config.prob_floor, threads);

  bool preserving = report.mr1.hold_rate == 1.0 && report.mr2.hold_rate == 1.0;
  for (double tau : report.options.taus) {
    TauResult result{tau, std::nullopt};
    try {
      result.outcome = HighConfidenceAgreement(data, tau, threads);
      preserving = preserving && result.outcome->hold_rate == 1.0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyConfidenceSubset) throw;
      report.warnings.push_back("MR3 undefined at tau=" + FormatTau(tau) +
                                ": " + e.what());
    }
    report.mr3.push_back(std::move(result));
  }
  for (std::size_t bins : report.options.bin_counts) {
    BinResult result{bins, CalibrationAlignment(data, bins, options.eca_mode)};
    preserving = preserving && result.outcome.hold_rate <= options.eca_threshold;
    report.mr4.push_back(std::move(result));
  }
  report.behavior_preserving = preserving;
  return report;
}

}  // namespace metafidelity

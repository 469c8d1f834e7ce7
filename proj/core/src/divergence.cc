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

#include "metafidelity/divergence.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "metafidelity/error.h"

namespace metafidelity {
namespace {

constexpr double kNormalizedTolerance = 1e-12;

void CheckTemperature(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kNonPositiveTemperature,
                "temperature must be a finite positive number, got " +
                    std::to_string(temperature));
  }
}

void CheckFinite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFinite,
                  std::string(what) + " contains a non-finite value");
    }
  }
}

}  // namespace

ProbabilityVector ProbabilityVector::Normalize(std::vector<double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kInvalidField,
                "a distribution needs at least two classes");
  }
  CheckFinite(values, "distribution");
  double sum = 0.0;
  for (double v : values) {
    if (v < 0.0) {
      throw Error(ErrorCode::kNotASimplex, "negative probability");
    }
    sum += v;
  }
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::kNotASimplex, "distribution has zero mass");
  }
  if (sum != 1.0) {
    for (double& v : values) v /= sum;
  }
  return ProbabilityVector(std::move(values));
}

ProbabilityVector ProbabilityVector::FromNormalized(std::vector<double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kInvalidField,
                "a distribution needs at least two classes");
  }
  CheckFinite(values, "distribution");
  double sum = 0.0;
  for (double v : values) {
    if (v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::kNotASimplex, "probability outside [0, 1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormalizedTolerance) {
    throw Error(ErrorCode::kNotASimplex,
                "distribution is not normalized to 1e-12");
  }
  return ProbabilityVector(std::move(values));
}

ProbabilityVector ProbabilityVector::Floored(double floor) const {
  const bool needs_floor = std::any_of(values_.begin(), values_.end(),
                                       [floor](double v) { return v < floor; });
  if (!needs_floor) return *this;
  std::vector<double> raised(values_);
  double sum = 0.0;
  for (double& v : raised) {
    v = std::max(v, floor);
    sum += v;
  }
  for (double& v : raised) v /= sum;
  return ProbabilityVector(std::move(raised));
}

std::size_t ArgMax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

double MaxValue(std::span<const double> values) {
  return values[ArgMax(values)];
}

std::vector<double> LogSoftmax(std::span<const double> logits,
                               double temperature) {
  CheckTemperature(temperature);
  CheckFinite(logits, "logits");
  if (logits.empty()) {
    throw Error(ErrorCode::kInvalidField, "empty logit vector");
  }
  const double top = MaxValue(logits);
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = (logits[i] - top) / temperature;
    sum += std::exp(out[i]);
  }
  // sum >= 1 because the maximum contributes exp(0).
  const double log_sum = std::log(sum);
  for (double& v : out) v -= log_sum;
  return out;
}

std::vector<double> Softmax(std::span<const double> logits,
                            double temperature) {
  CheckTemperature(temperature);
  CheckFinite(logits, "logits");
  if (logits.empty()) {
    throw Error(ErrorCode::kInvalidField, "empty logit vector");
  }
  const double top = MaxValue(logits);
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp((logits[i] - top) / temperature);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

double KlDivergence(const ProbabilityVector& p, const ProbabilityVector& q,
                    double floor) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "KL divergence needs equal-length distributions (" +
                    std::to_string(p.size()) + " vs " +
                    std::to_string(q.size()) + ")");
  }
  const ProbabilityVector q_floored = q.Floored(floor);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    total += p[i] * std::log(p[i] / q_floored[i]);
  }
  return std::max(total, 0.0);
}

double KlDivergence(std::span<const double> p, std::span<const double> q,
                    double floor) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "KL divergence needs equal-length distributions");
  }
  return KlDivergence(
      ProbabilityVector::Normalize(std::vector<double>(p.begin(), p.end())),
      ProbabilityVector::Normalize(std::vector<double>(q.begin(), q.end())),
      floor);
}

std::vector<double> KdLossTerms(
    std::span<const std::vector<double>> teacher_logits,
    std::span<const std::vector<double>> student_logits, double temperature) {
  CheckTemperature(temperature);
  if (teacher_logits.size() != student_logits.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "teacher and student sample counts differ");
  }
  std::vector<double> terms;
  terms.reserve(teacher_logits.size());
  for (std::size_t i = 0; i < teacher_logits.size(); ++i) {
    if (teacher_logits[i].size() != student_logits[i].size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "class counts differ at sample " + std::to_string(i));
    }
    const std::vector<double> soft_teacher =
        Softmax(teacher_logits[i], temperature);
    const std::vector<double> log_student =
        LogSoftmax(student_logits[i], temperature);
    double cross_entropy = 0.0;
    for (std::size_t j = 0; j < soft_teacher.size(); ++j) {
      cross_entropy -= soft_teacher[j] * log_student[j];
    }
    terms.push_back(cross_entropy);
  }
  return terms;
}

double KdLoss(std::span<const std::vector<double>> teacher_logits,
              std::span<const std::vector<double>> student_logits,
              double temperature) {
  const std::vector<double> terms =
      KdLossTerms(teacher_logits, student_logits, temperature);
  if (terms.empty()) {
    throw Error(ErrorCode::kEmptyInput, "distillation loss over zero samples");
  }
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum / static_cast<double>(terms.size()) * temperature * temperature;
}

}  // namespace metafidelity

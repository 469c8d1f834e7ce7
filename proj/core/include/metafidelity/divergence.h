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

// Softmax, KL divergence and the distillation-loss diagnostic. All logarithms
// are natural.

#ifndef METAFIDELITY_DIVERGENCE_H_
#define METAFIDELITY_DIVERGENCE_H_

#include <cstddef>
#include <span>
#include <vector>

namespace metafidelity {

inline constexpr double kDefaultProbFloor = 1e-12;

// A discrete distribution over >= 2 classes. Entries are finite and
// non-negative and sum to 1 within 1e-12.
class ProbabilityVector {
 public:
  // Divides `values` by their sum. Throws kNonFinite, kNotASimplex (negative
  // entry or zero mass) or kInvalidField (fewer than two entries).
  static ProbabilityVector Normalize(std::vector<double> values);

  // Adopts `values` unchanged after checking the invariant to 1e-12. Used
  // when re-reading serialized distributions so they stay bit-identical.
  static ProbabilityVector FromNormalized(std::vector<double> values);

  // Raises entries below `floor` to `floor` and renormalizes. Returns an
  // identical copy when no entry is below the floor.
  ProbabilityVector Floored(double floor) const;

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const ProbabilityVector&,
                         const ProbabilityVector&) = default;

 private:
  explicit ProbabilityVector(std::vector<double> values)
      : values_(std::move(values)) {}

  std::vector<double> values_;
};

// Index of the largest entry; ties go to the lowest index.
std::size_t ArgMax(std::span<const double> values);

// Largest entry of a non-empty vector.
double MaxValue(std::span<const double> values);

// softmax(logits / T) with the maximum subtracted first, so large logits do
// not overflow. The result is not floored: tiny masses survive as they are.
std::vector<double> Softmax(std::span<const double> logits,
                            double temperature = 1.0);

// log softmax(logits / T), computed without forming the exponentials.
std::vector<double> LogSoftmax(std::span<const double> logits,
                               double temperature = 1.0);

// D_KL(p || q) = sum_i p_i ln(p_i / q_i).
//
// Terms with p_i = 0 contribute 0. `q` is floored at `floor` (and
// renormalized) before evaluation so zero student mass yields a large finite
// divergence instead of infinity. The result is clamped at 0 to absorb
// rounding when p == q.
double KlDivergence(const ProbabilityVector& p, const ProbabilityVector& q,
                    double floor = kDefaultProbFloor);

// Convenience overload: normalizes both inputs first.
double KlDivergence(std::span<const double> p, std::span<const double> q,
                    double floor = kDefaultProbFloor);

// Per-sample soft cross-entropy -sum_j softmax(t/T)_j * log softmax(s/T)_j,
// i.e. the class-summed inner term of the distillation loss before the
// sample mean and the T^2 factor.
std::vector<double> KdLossTerms(std::span<const std::vector<double>> teacher_logits,
                                std::span<const std::vector<double>> student_logits,
                                double temperature);

// Distillation loss: mean of KdLossTerms over samples, scaled by T^2.
double KdLoss(std::span<const std::vector<double>> teacher_logits,
              std::span<const std::vector<double>> student_logits,
              double temperature);

}  // namespace metafidelity

#endif  // METAFIDELITY_DIVERGENCE_H_

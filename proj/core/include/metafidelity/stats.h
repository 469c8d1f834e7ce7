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

// Rank-based significance tests: Friedman over a blocks x treatments matrix
// and the Wilcoxon signed-rank test over paired samples. Both are two-sided
// and use midranks for ties.

#ifndef METAFIDELITY_STATS_H_
#define METAFIDELITY_STATS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace metafidelity {

// Rows are subjects (blocks), columns are treatments.
class ObservationMatrix {
 public:
  // Throws kInvalidField for ragged rows and kNonFinite for NaN/inf.
  ObservationMatrix(std::vector<std::string> treatments,
                    std::vector<std::vector<double>> rows);

  std::size_t rows() const { return rows_.size(); }
  std::size_t columns() const { return treatments_.size(); }
  const std::vector<std::string>& treatments() const { return treatments_; }
  std::span<const double> row(std::size_t i) const { return rows_[i]; }
  double at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  std::vector<double> column(std::size_t j) const;

 private:
  std::vector<std::string> treatments_;
  std::vector<std::vector<double>> rows_;
};

// 1-based ranks with tied values sharing their mean rank.
std::vector<double> MidRanks(std::span<const double> values);

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t degrees_of_freedom = 0;
  std::vector<double> mean_ranks;
};

// Tie-corrected Friedman chi-square with k - 1 degrees of freedom. When
// every row is entirely tied there is no rank information: the statistic is
// 0 and p is 1. Throws kTooFewRows (n < 2) or kDegenerateMatrix (k < 2).
FriedmanResult FriedmanTest(const ObservationMatrix& m);

enum class WilcoxonMethod { kExact, kNormal };

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_value = 1.0;
  std::size_t n_used = 0;     // pairs left after dropping zero differences
  std::size_t n_dropped = 0;  // zero differences
  WilcoxonMethod method = WilcoxonMethod::kExact;
};

// Largest n (after dropping zeros) that still gets the exact null
// distribution.
inline constexpr std::size_t kWilcoxonExactMaxN = 25;

// Signed-rank test on a - b. Zero differences are dropped. For n <= 25 the
// p-value comes from the exact permutation distribution of the midrank
// sums; above that from the normal approximation with tie and continuity
// correction. Throws kLengthMismatch or kAllZeroDifferences.
WilcoxonResult WilcoxonSignedRank(std::span<const double> a,
                                  std::span<const double> b);

std::string_view WilcoxonMethodName(WilcoxonMethod method);

}  // namespace metafidelity

#endif  // METAFIDELITY_STATS_H_

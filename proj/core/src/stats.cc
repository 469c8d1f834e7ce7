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

#include "metafidelity/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "metafidelity/error.h"

namespace metafidelity {
namespace {

// p-values live in (0, 1].
double ClampP(double p) {
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

// Sum of t^3 - t over groups of tied values.
double TieTerm(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i + 1;
    while (j < values.size() && values[j] == values[i]) ++j;
    const double t = static_cast<double>(j - i);
    total += t * t * t - t;
    i = j;
  }
  return total;
}

}  // namespace

ObservationMatrix::ObservationMatrix(std::vector<std::string> treatments,
                                     std::vector<std::vector<double>> rows)
    : treatments_(std::move(treatments)), rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != treatments_.size()) {
      throw Error(ErrorCode::kInvalidField,
                  "row " + std::to_string(i + 1) + " has " +
                      std::to_string(rows_[i].size()) + " values, expected " +
                      std::to_string(treatments_.size()));
    }
    for (double v : rows_[i]) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFinite,
                    "row " + std::to_string(i + 1) + " has a non-finite value");
      }
    }
  }
}

std::vector<double> ObservationMatrix::column(std::size_t j) const {
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[j]);
  return out;
}

std::vector<double> MidRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mid;
    i = j;
  }
  return ranks;
}

FriedmanResult FriedmanTest(const ObservationMatrix& m) {
  const std::size_t n = m.rows();
  const std::size_t k = m.columns();
  if (k < 2) {
    throw Error(ErrorCode::kDegenerateMatrix,
                "Friedman test needs at least two treatments");
  }
  if (n < 2) {
    throw Error(ErrorCode::kTooFewRows, "Friedman test needs at least two rows");
  }

  std::vector<double> rank_sums(k, 0.0);
  double ties = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> ranks = MidRanks(m.row(i));
    for (std::size_t j = 0; j < k; ++j) rank_sums[j] += ranks[j];
    ties += TieTerm(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }

  FriedmanResult result;
  result.degrees_of_freedom = k - 1;
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  for (double s : rank_sums) result.mean_ranks.push_back(s / dn);

  const double correction = 1.0 - ties / (dn * dk * (dk * dk - 1.0));
  if (correction <= 0.0) {
    // Every row is one tie group: no treatment is ranked above another.
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  double square_sum = 0.0;
  for (double s : rank_sums) square_sum += s * s;
  const double raw =
      12.0 / (dn * dk * (dk + 1.0)) * square_sum - 3.0 * dn * (dk + 1.0);
  result.statistic = std::max(0.0, raw / correction);
  result.p_value = ClampP(boost::math::gamma_q(
      static_cast<double>(result.degrees_of_freedom) / 2.0,
      result.statistic / 2.0));
  return result;
}

std::string_view WilcoxonMethodName(WilcoxonMethod method) {
  return method == WilcoxonMethod::kExact ? "exact" : "normal";
}

WilcoxonResult WilcoxonSignedRank(std::span<const double> a,
                                  std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "Wilcoxon test needs samples of equal length");
  }
  if (a.empty()) {
    throw Error(ErrorCode::kAllZeroDifferences, "no paired observations");
  }
  std::vector<double> diffs;
  WilcoxonResult result;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (!std::isfinite(d)) {
      throw Error(ErrorCode::kNonFinite, "non-finite paired difference");
    }
    if (d == 0.0) {
      ++result.n_dropped;
    } else {
      diffs.push_back(d);
    }
  }
  if (diffs.empty()) {
    throw Error(ErrorCode::kAllZeroDifferences, "every paired difference is zero");
  }
  const std::size_t n = diffs.size();
  result.n_used = n;

  std::vector<double> magnitudes(n);
  for (std::size_t i = 0; i < n; ++i) magnitudes[i] = std::abs(diffs[i]);
  const std::vector<double> ranks = MidRanks(magnitudes);
  for (std::size_t i = 0; i < n; ++i) {
    (diffs[i] > 0.0 ? result.w_plus : result.w_minus) += ranks[i];
  }
  result.statistic = std::min(result.w_plus, result.w_minus);

  if (n <= kWilcoxonExactMaxN) {
    result.method = WilcoxonMethod::kExact;
    // Midranks are multiples of 1/2, so doubled ranks are integers and the
    // null distribution of the doubled W+ is a subset-sum count.
    std::vector<std::size_t> doubled(n);
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      doubled[i] = static_cast<std::size_t>(std::lround(2.0 * ranks[i]));
      total += doubled[i];
    }
    std::vector<double> counts(total + 1, 0.0);
    counts[0] = 1.0;
    std::size_t reach = 0;
    for (std::size_t r : doubled) {
      for (std::size_t s = reach + 1; s-- > 0;) {
        if (counts[s] != 0.0) counts[s + r] += counts[s];
      }
      reach += r;
    }
    const auto observed =
        static_cast<std::size_t>(std::lround(2.0 * result.statistic));
    double tail = 0.0;
    for (std::size_t s = 0; s <= observed; ++s) tail += counts[s];
    result.p_value = ClampP(2.0 * tail / std::ldexp(1.0, static_cast<int>(n)));
    return result;
  }

  result.method = WilcoxonMethod::kNormal;
  const double dn = static_cast<double>(n);
  const double mean = dn * (dn + 1.0) / 4.0;
  const double variance =
      dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - TieTerm(magnitudes) / 48.0;
  const double z =
      std::abs(std::abs(result.statistic - mean) - 0.5) / std::sqrt(variance);
  result.p_value = ClampP(std::erfc(z / std::sqrt(2.0)));
  return result;
}

}  // namespace metafidelity

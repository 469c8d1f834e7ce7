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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "metafidelity/error.h"
#include "testing/expect_error.h"
#include "testing/oracles.h"

namespace metafidelity {
namespace {

struct WilcoxonCase {
  std::vector<double> a;
  std::vector<double> b;
  double statistic;
  double p_value;
};

struct FriedmanCase {
  std::vector<std::vector<double>> rows;
  double statistic;
  double p_value;
};

#include "stats_reference.inc"

ObservationMatrix Matrix(std::vector<std::vector<double>> rows) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < rows.front().size(); ++j) {
    names.push_back("t" + std::to_string(j));
  }
  return ObservationMatrix(std::move(names), std::move(rows));
}

std::vector<std::vector<double>> RandomRows(std::mt19937_64& rng, std::size_t n,
                                            std::size_t k) {
  std::uniform_int_distribution<int> u(0, 20);
  std::vector<std::vector<double>> rows(n, std::vector<double>(k));
  for (auto& row : rows) {
    for (double& x : row) x = u(rng) / 20.0;
  }
  return rows;
}

TEST(MidRanksTest, TiesShareAverageRank) {
  EXPECT_EQ(MidRanks(std::vector<double>{3.0, 1.0, 2.0}),
            (std::vector<double>{3.0, 1.0, 2.0}));
  EXPECT_EQ(MidRanks(std::vector<double>{5.0, 5.0, 1.0, 5.0}),
            (std::vector<double>{3.0, 3.0, 1.0, 3.0}));
}

TEST(FriedmanTest, IdenticalColumnsGiveNoEvidence) {
  const FriedmanResult r =
      FriedmanTest(Matrix({{1, 1, 1}, {2, 2, 2}, {0.5, 0.5, 0.5}}));
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(FriedmanTest, StrictlyOrderedRows) {
  const FriedmanResult r =
      FriedmanTest(Matrix({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {1, 2, 3}}));
  EXPECT_NEAR(r.statistic, 8.0, 1e-12);
  // Chi-square with two degrees of freedom has survival exp(-x / 2).
  EXPECT_NEAR(r.p_value, std::exp(-4.0), 1e-14);
  EXPECT_NEAR(r.p_value, 0.018316, 1e-3);
  EXPECT_EQ(r.degrees_of_freedom, 2u);
  EXPECT_EQ(r.mean_ranks, (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(FriedmanTest, MatchesReference) {
  for (const FriedmanCase& c : kFriedmanCases) {
    const FriedmanResult r = FriedmanTest(Matrix(c.rows));
    EXPECT_NEAR(r.statistic, c.statistic, 1e-9);
    EXPECT_NEAR(r.p_value, c.p_value, 1e-9);
  }
}

TEST(FriedmanTest, ShapeErrors) {
  EXPECT_MF_ERROR(FriedmanTest(Matrix({{1}, {2}})), ErrorCode::kDegenerateMatrix);
  EXPECT_MF_ERROR(FriedmanTest(Matrix({{1, 2, 3}})), ErrorCode::kTooFewRows);
  EXPECT_MF_ERROR(ObservationMatrix({"a", "b"}, {{1, 2}, {1}}),
                  ErrorCode::kInvalidField);
  EXPECT_MF_ERROR(ObservationMatrix({"a", "b"}, {{1, NAN}}), ErrorCode::kNonFinite);
}

TEST(FriedmanTest, InvariantUnderMonotoneTransformAndPermutation) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 4;
    auto rows = RandomRows(rng, 3 + trial % 10, k);
    const FriedmanResult base = FriedmanTest(Matrix(rows));
    EXPECT_GT(base.p_value, 0.0);
    EXPECT_LE(base.p_value, 1.0);

    auto warped = rows;
    for (auto& row : warped) {
      for (double& x : row) x = std::exp(3.0 * x) + x * x * x;
    }
    const FriedmanResult w = FriedmanTest(Matrix(warped));
    EXPECT_NEAR(w.statistic, base.statistic, 1e-9);
    EXPECT_NEAR(w.p_value, base.p_value, 1e-12);

    auto shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (auto& row : shuffled) {
      std::vector<double> relabeled(k);
      for (std::size_t j = 0; j < k; ++j) relabeled[j] = row[order[j]];
      row = relabeled;
    }
    const FriedmanResult s = FriedmanTest(Matrix(shuffled));
    EXPECT_NEAR(s.statistic, base.statistic, 1e-9);
    EXPECT_NEAR(s.p_value, base.p_value, 1e-12);
  }
}

TEST(WilcoxonTest, ThreePositiveDifferences) {
  const std::vector<double> a = {2, 4, 6}, b = {1, 2, 3};
  const WilcoxonResult r = WilcoxonSignedRank(a, b);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.w_plus, 6.0);
  EXPECT_EQ(r.method, WilcoxonMethod::kExact);
  EXPECT_EQ(r.p_value, testing::EnumeratedWilcoxonP({1, 2, 3}, 0.0));
  EXPECT_EQ(r.p_value, 0.25);
}

TEST(WilcoxonTest, Errors) {
  const std::vector<double> a = {1, 2, 3};
  EXPECT_MF_ERROR(WilcoxonSignedRank(a, a), ErrorCode::kAllZeroDifferences);
  const std::vector<double> b = {1, 2};
  EXPECT_MF_ERROR(WilcoxonSignedRank(a, b), ErrorCode::kLengthMismatch);
}

TEST(WilcoxonTest, ZeroDifferencesAreDropped) {
  const std::vector<double> a = {1, 5, 7, 3}, b = {1, 4, 5, 0};
  const WilcoxonResult r = WilcoxonSignedRank(a, b);
  EXPECT_EQ(r.n_used, 3u);
  EXPECT_EQ(r.n_dropped, 1u);
  EXPECT_EQ(r.p_value, 0.25);
}

TEST(WilcoxonTest, ExactMatchesSignEnumeration) {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> u(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 14;
    std::vector<double> a(n), b(n, 0.0);
    for (double& x : a) {
      do {
        x = u(rng);
      } while (x == 0.0);
    }
    std::vector<double> abs_d(n);
    for (std::size_t i = 0; i < n; ++i) abs_d[i] = std::fabs(a[i]);
    const WilcoxonResult r = WilcoxonSignedRank(a, b);
    ASSERT_EQ(r.method, WilcoxonMethod::kExact);
    EXPECT_NEAR(r.p_value, testing::EnumeratedWilcoxonP(MidRanks(abs_d), r.statistic),
                1e-12);
  }
}

TEST(WilcoxonTest, NormalApproximationMatchesReference) {
  for (const WilcoxonCase& c : kWilcoxonCases) {
    const WilcoxonResult r = WilcoxonSignedRank(c.a, c.b);
    EXPECT_EQ(r.method, WilcoxonMethod::kNormal);
    EXPECT_EQ(r.statistic, c.statistic);
    EXPECT_NEAR(r.p_value, c.p_value, 1e-3);
    EXPECT_NEAR(r.p_value, c.p_value, 1e-9 + 1e-9 * c.p_value);
  }
}

TEST(WilcoxonTest, SwapAndMonotoneInvariance) {
  std::mt19937_64 rng(33);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t len = 5 + trial % 40;
    std::vector<double> a(len), b(len);
    // Sixteenths keep the affine map below exact, ties included.
    for (std::size_t i = 0; i < len; ++i) {
      a[i] = std::round(16.0 * n(rng)) / 16.0;
      b[i] = a[i] + std::round(16.0 * (0.3 * n(rng) + 0.1)) / 16.0;
    }
    if (a == b) continue;
    const WilcoxonResult ab = WilcoxonSignedRank(a, b);
    const WilcoxonResult ba = WilcoxonSignedRank(b, a);
    EXPECT_EQ(ab.p_value, ba.p_value);
    EXPECT_GT(ab.p_value, 0.0);
    EXPECT_LE(ab.p_value, 1.0);
    std::vector<double> a2 = a, b2 = b;
    for (double& x : a2) x = 3.0 * x + 7.0;
    for (double& x : b2) x = 3.0 * x + 7.0;
    EXPECT_NEAR(WilcoxonSignedRank(a2, b2).p_value, ab.p_value, 1e-12);
  }
}

}  // namespace
}  // namespace metafidelity

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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "metafidelity/error.h"
#include "testing/expect_error.h"
#include "testing/oracles.h"

namespace metafidelity {
namespace {

using testing::NaiveKl;
using testing::RandomSimplex;

TEST(SoftmaxTest, ZeroLogitsAreUniform) {
  const std::vector<double> u = Softmax(std::vector<double>{0.0, 0.0});
  EXPECT_DOUBLE_EQ(u[0], 0.5);
  EXPECT_DOUBLE_EQ(u[1], 0.5);
}

TEST(SoftmaxTest, LogTwoGivesTwoThirds) {
  const std::vector<double> u = Softmax(std::vector<double>{std::log(2.0), 0.0});
  EXPECT_NEAR(u[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(u[1], 1.0 / 3.0, 1e-15);
}

TEST(SoftmaxTest, LargeLogitDoesNotOverflow) {
  const std::vector<double> u = Softmax(std::vector<double>{1000.0, 0.0});
  EXPECT_TRUE(std::isfinite(u[0]));
  EXPECT_EQ(u[0], 1.0);
  EXPECT_LT(u[1], 1e-300);
}

TEST(SoftmaxTest, RejectsNonPositiveTemperature) {
  EXPECT_MF_ERROR(Softmax(std::vector<double>{1.0, 2.0}, 0.0),
                  ErrorCode::kNonPositiveTemperature);
  EXPECT_MF_ERROR(Softmax(std::vector<double>{1.0, 2.0}, -1.0),
                  ErrorCode::kNonPositiveTemperature);
}

TEST(SoftmaxTest, ShiftInvariance) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> logits(2 + trial % 6);
    for (double& x : logits) x = n(rng);
    const double c = n(rng) * 10.0;
    std::vector<double> shifted = logits;
    for (double& x : shifted) x += c;
    const double t = 0.25 + (trial % 8) * 0.5;
    const std::vector<double> a = Softmax(logits, t);
    const std::vector<double> b = Softmax(shifted, t);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  }
}

TEST(SoftmaxTest, PreservesArgMax) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> logits(2 + trial % 5);
    for (double& x : logits) x = n(rng);
    for (double t : {0.1, 0.5, 1.0, 2.0, 10.0}) {
      EXPECT_EQ(ArgMax(Softmax(logits, t)), ArgMax(logits));
    }
  }
}

TEST(ArgMaxTest, TiesGoToLowestIndex) {
  EXPECT_EQ(ArgMax(std::vector<double>{0.4, 0.4, 0.2}), 0u);
  EXPECT_EQ(ArgMax(std::vector<double>{0.2, 0.4, 0.4}), 1u);
}

TEST(ProbabilityVectorTest, NormalizeValidation) {
  EXPECT_MF_ERROR(ProbabilityVector::Normalize({1.0}), ErrorCode::kInvalidField);
  EXPECT_MF_ERROR(ProbabilityVector::Normalize({0.5, NAN}), ErrorCode::kNonFinite);
  EXPECT_MF_ERROR(ProbabilityVector::Normalize({0.5, -0.1}), ErrorCode::kNotASimplex);
  EXPECT_MF_ERROR(ProbabilityVector::Normalize({0.0, 0.0}), ErrorCode::kNotASimplex);
  const ProbabilityVector p = ProbabilityVector::Normalize({1.0, 3.0});
  EXPECT_DOUBLE_EQ(p[0], 0.25);
  EXPECT_DOUBLE_EQ(p[1], 0.75);
}

TEST(ProbabilityVectorTest, FlooredSumsToOne) {
  const ProbabilityVector p = ProbabilityVector::Normalize({1.0, 0.0, 0.0});
  const ProbabilityVector f = p.Floored(1e-12);
  double s = 0.0;
  for (double x : f.values()) {
    s += x;
    EXPECT_GT(x, 0.0);
  }
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(KlDivergenceTest, IdentityIsZero) {
  const ProbabilityVector p = ProbabilityVector::Normalize({0.2, 0.3, 0.5});
  EXPECT_EQ(KlDivergence(p, p), 0.0);
}

TEST(KlDivergenceTest, ZeroMassConventionGivesLogTwo) {
  const ProbabilityVector p = ProbabilityVector::Normalize({1.0, 0.0});
  const ProbabilityVector q = ProbabilityVector::Normalize({0.5, 0.5});
  EXPECT_NEAR(KlDivergence(p, q), std::log(2.0), 1e-12);
}

TEST(KlDivergenceTest, MatchesHighPrecisionValue) {
  const ProbabilityVector p = ProbabilityVector::Normalize({0.9, 0.1});
  const ProbabilityVector q = ProbabilityVector::Normalize({0.5, 0.5});
  EXPECT_NEAR(KlDivergence(p, q), 0.3680642071684970699, 1e-15);
  EXPECT_NEAR(KlDivergence(q, p), 0.5108256237659906832, 1e-15);
  EXPECT_GT(std::fabs(KlDivergence(p, q) - KlDivergence(q, p)), 0.1);
}

TEST(KlDivergenceTest, ZeroDenominatorIsFloored) {
  const std::vector<double> p = {0.5, 0.5};
  const std::vector<double> q = {1.0, 0.0};
  const double kl = KlDivergence(p, q);
  EXPECT_TRUE(std::isfinite(kl));
  EXPECT_NEAR(kl, NaiveKl(p, q), 1e-12);
}

TEST(KlDivergenceTest, LengthMismatch) {
  EXPECT_MF_ERROR(KlDivergence(std::vector<double>{0.5, 0.5},
                               std::vector<double>{0.2, 0.3, 0.5}),
                  ErrorCode::kLengthMismatch);
}

TEST(KlDivergenceTest, RandomSimplexProperties) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 2 + trial % 9;
    const std::vector<double> p = RandomSimplex(rng, k);
    const std::vector<double> q = RandomSimplex(rng, k);
    const double kl = KlDivergence(p, q);
    EXPECT_GE(kl, 0.0);
    EXPECT_NEAR(kl, NaiveKl(p, q), 1e-12);
    EXPECT_NEAR(KlDivergence(p, p), 0.0, 1e-12);
    double l1 = 0.0;
    for (std::size_t i = 0; i < k; ++i) l1 += std::fabs(p[i] - q[i]);
    // Pinsker: separated distributions cannot have near-zero divergence.
    EXPECT_GE(kl + 1e-12, 0.5 * l1 * l1);
  }
}

TEST(KdLossTest, UniformCrossEntropy) {
  const std::vector<std::vector<double>> p = {{0.0, 0.0}};
  EXPECT_NEAR(KdLoss(p, p, 1.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(KdLoss(p, p, 2.0), 4.0 * std::log(2.0), 1e-14);
}

TEST(KdLossTest, OpposedLogits) {
  const std::vector<std::vector<double>> p = {{5.0, 0.0}};
  const std::vector<std::vector<double>> q = {{0.0, 5.0}};
  EXPECT_NEAR(KdLoss(p, q, 1.0), 4.973251093867694, 1e-12);
}

TEST(KdLossTest, MeanOverSamples) {
  const std::vector<std::vector<double>> p = {{0.0, 0.0}, {5.0, 0.0}};
  const std::vector<std::vector<double>> q = {{0.0, 0.0}, {0.0, 5.0}};
  const std::vector<double> terms = KdLossTerms(p, q, 1.0);
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_NEAR(KdLoss(p, q, 1.0), (terms[0] + terms[1]) / 2.0, 1e-15);
}

TEST(KdLossTest, Errors) {
  const std::vector<std::vector<double>> none;
  EXPECT_MF_ERROR(KdLoss(none, none, 1.0), ErrorCode::kEmptyInput);
  const std::vector<std::vector<double>> one = {{0.0, 0.0}};
  const std::vector<std::vector<double>> two = {{0.0, 0.0}, {1.0, 0.0}};
  EXPECT_MF_ERROR(KdLoss(one, two, 1.0), ErrorCode::kLengthMismatch);
  EXPECT_MF_ERROR(KdLoss(one, one, 0.0), ErrorCode::kNonPositiveTemperature);
}

}  // namespace
}  // namespace metafidelity

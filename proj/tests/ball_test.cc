//
// Copyright 2026 The Purify Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "purify/ball.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "purify/distributions.h"

namespace purify {
namespace {

LqBall Ball(Norm q, int d, double r) { return *LqBall::Centered(q, d, r); }

TEST(LqBallTest, RejectsInvalid) {
  EXPECT_FALSE(LqBall::Create(Norm::kL2, {}, 1.0).ok());
  EXPECT_FALSE(LqBall::Create(Norm::kL2, {0.0}, 0.0).ok());
  EXPECT_FALSE(LqBall::Create(Norm::kL2, {0.0}, -1.0).ok());
  EXPECT_FALSE(LqBall::Create(Norm::kL2, {NAN}, 1.0).ok());
}

TEST(LqBallTest, MembershipExactForL1AndLinf) {
  EXPECT_TRUE(Ball(Norm::kL1, 2, 1.0).Contains({0.5, -0.5}));
  EXPECT_FALSE(Ball(Norm::kL1, 2, 1.0).Contains({0.5, -0.50001}));
  EXPECT_TRUE(Ball(Norm::kLinf, 2, 1.0).Contains({1.0, -1.0}));
  EXPECT_FALSE(Ball(Norm::kLinf, 2, 1.0).Contains({1.0, -1.0000001}));
  EXPECT_TRUE(Ball(Norm::kL2, 2, 5.0).Contains({3.0, 4.0}));
}

TEST(SampleUniformBallTest, CubeCoordinatesAreUniform) {
  RngStream rng(1, 0);
  const LqBall ball = Ball(Norm::kLinf, 3, 1.0);
  const int n = 100000;
  std::vector<double> sum(3), sumsq(3);
  for (int i = 0; i < n; ++i) {
    auto x = SampleUniformBall(ball, rng);
    for (int j = 0; j < 3; ++j) {
      sum[j] += x[j];
      sumsq[j] += x[j] * x[j];
    }
  }
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(sum[j] / n, 0.0, 0.01);
    EXPECT_NEAR(sumsq[j] / n, 1.0 / 3.0, 0.01);
  }
}

TEST(SampleUniformBallTest, OneDimensionalL2BallIsInterval) {
  RngStream rng(2, 0);
  const LqBall ball = Ball(Norm::kL2, 1, 1.0);
  const int n = 100000;
  int below_half = 0;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const double x = SampleUniformBall(ball, rng)[0];
    sum += x;
    below_half += x < -0.5;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(static_cast<double>(below_half) / n, 0.25, 0.01);
}

TEST(SampleUniformBallTest, L1BallMeanAndMaxNorm) {
  RngStream rng(3, 0);
  const LqBall ball = Ball(Norm::kL1, 5, 2.0);
  const int n = 100000;
  std::vector<double> sum(5);
  double max_norm = 0;
  for (int i = 0; i < n; ++i) {
    auto x = SampleUniformBall(ball, rng);
    for (int j = 0; j < 5; ++j) sum[j] += x[j];
    max_norm = std::max(max_norm, NormOf(x, Norm::kL1));
  }
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(sum[j] / n, 0.0, 0.02);
  EXPECT_LE(max_norm, 2.0);
}

// The radial CDF of a uniform d-ball is (r/R)^d.
TEST(SampleUniformBallTest, RadialDistributionMatchesVolume) {
  for (Norm q : {Norm::kL1, Norm::kL2, Norm::kLinf}) {
    RngStream rng(4, static_cast<int>(q));
    const LqBall ball = Ball(q, 3, 1.0);
    const int n = 50000;
    int inner = 0;
    for (int i = 0; i < n; ++i) {
      inner += NormOf(SampleUniformBall(ball, rng), q) <= 0.5;
    }
    EXPECT_NEAR(static_cast<double>(inner) / n, 0.125, 0.006);
  }
}

TEST(SampleUniformBallTest, MembershipNeverViolatedAndMeanNearCenter) {
  for (Norm q : {Norm::kL1, Norm::kL2, Norm::kLinf}) {
    RngStream rng(5, static_cast<int>(q));
    auto ball = *LqBall::Create(q, {1.0, -2.0, 0.5, 3.0}, 0.75);
    const int n = 1000000 / 3;
    std::vector<double> sum(4), sumsq(4);
    for (int i = 0; i < n; ++i) {
      auto x = SampleUniformBall(ball, rng);
      ASSERT_TRUE(ball.Contains(x));
      for (int j = 0; j < 4; ++j) {
        sum[j] += x[j];
        sumsq[j] += x[j] * x[j];
      }
    }
    for (int j = 0; j < 4; ++j) {
      const double mean = sum[j] / n;
      const double sd = std::sqrt(sumsq[j] / n - mean * mean);
      EXPECT_LE(std::fabs(mean - ball.center()[j]), 4 * sd / std::sqrt(n));
    }
  }
}

TEST(ClipToBallTest, Examples) {
  const LqBall ball = Ball(Norm::kL2, 2, 1.0);
  EXPECT_EQ(ClipToBall({0.3, 0.4}, ball), (std::vector<double>{0.3, 0.4}));
  auto c = ClipToBall({3.0, 4.0}, ball);
  EXPECT_NEAR(c[0], 0.6, 1e-15);
  EXPECT_NEAR(c[1], 0.8, 1e-15);
  auto l = ClipToBall({2.0, -0.5, -3.0}, Ball(Norm::kLinf, 3, 1.0));
  EXPECT_EQ(l, (std::vector<double>{1.0, -0.5, -1.0}));
}

TEST(ClipToBallTest, IdempotentAndInside) {
  RngStream rng(6, 0);
  for (Norm q : {Norm::kL1, Norm::kL2, Norm::kLinf}) {
    auto ball = *LqBall::Create(q, {0.5, -0.5, 2.0}, 1.3);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> x = GaussianVector(rng, 3, 3.0);
      auto c = ClipToBall(x, ball);
      EXPECT_TRUE(ball.Contains(c));
      EXPECT_EQ(ClipToBall(c, ball), c);
    }
  }
}

TEST(ClipToBallTest, NonExpansiveInL2AndLinf) {
  RngStream rng(7, 0);
  for (Norm q : {Norm::kL2, Norm::kLinf}) {
    const LqBall ball = Ball(q, 4, 1.0);
    for (int i = 0; i < 1000; ++i) {
      auto a = GaussianVector(rng, 4, 2.0), b = GaussianVector(rng, 4, 2.0);
      EXPECT_LE(Distance(ClipToBall(a, ball), ClipToBall(b, ball), q),
                Distance(a, b, q) * (1 + 1e-12));
    }
  }
}

// Radial scaling onto an l1 ball is not l1-non-expansive; it is 2-Lipschitz.
TEST(ClipToBallTest, L1RadialClipIsTwoLipschitz) {
  RngStream rng(8, 0);
  const LqBall ball = Ball(Norm::kL1, 3, 1.0);
  for (int i = 0; i < 1000; ++i) {
    auto a = GaussianVector(rng, 3, 2.0), b = GaussianVector(rng, 3, 2.0);
    EXPECT_LE(Distance(ClipToBall(a, ball), ClipToBall(b, ball), Norm::kL1),
              2.0 * Distance(a, b, Norm::kL1) * (1 + 1e-12));
  }
}

TEST(CalibrateDeltaW8Test, Examples) {
  // Diameter 1 means radius 0.5.
  EXPECT_DOUBLE_EQ(*CalibrateDeltaW8(Ball(Norm::kL2, 1, 0.5), 0.02, 0.01), 2.0);
  EXPECT_NEAR(*CalibrateDeltaW8(Ball(Norm::kL1, 2, 1.5), 2e-8, 1e-2), 6e-3,
              6e-3 * 1e-12);
}

TEST(CalibrateDeltaW8Test, TinyDeltaInLogSpace) {
  const LqBall ball = Ball(Norm::kL2, 64, 1.0);
  const double w8 = *CalibrateDeltaW8(ball, 1e-300, 0.5);
  EXPECT_TRUE(std::isfinite(w8));
  EXPECT_GT(w8, 0.0);
  const long double expected =
      std::exp(oracle::LogDeltaW8(2, 64, 2.0L, std::log(1e-300L), 0.5L));
  EXPECT_NEAR(w8, static_cast<double>(expected), 1e-12 * w8);
  const double w8_far =
      *CalibrateDeltaW8(ball, LogProbability::FromLog(-20000.0), 0.5);
  EXPECT_GT(w8_far, 0.0);
  EXPECT_NEAR(w8_far,
              static_cast<double>(
                  std::exp(oracle::LogDeltaW8(2, 64, 2.0L, -20000.0L, 0.5L))),
              1e-12 * w8_far);
}

TEST(CalibrateDeltaW8Test, MatchesOracleOnGrid) {
  for (Norm q : {Norm::kL1, Norm::kL2, Norm::kLinf}) {
    const int qi = q == Norm::kL1 ? 1 : (q == Norm::kL2 ? 2 : 0);
    for (int d : {1, 3, 10}) {
      for (double r : {0.5, 2.0}) {
        for (double delta : {1e-12, 1e-5}) {
          for (double omega : {0.01, 0.3}) {
            const double w8 = *CalibrateDeltaW8(Ball(q, d, r), delta, omega);
            const double expected = static_cast<double>(std::exp(
                oracle::LogDeltaW8(qi, d, 2.0L * r, std::log((long double)delta),
                                   omega)));
            EXPECT_NEAR(w8, expected, 1e-12 * expected);
          }
        }
      }
    }
  }
}

TEST(CalibrateDeltaW8Test, StrictMonotonicity) {
  for (Norm q : {Norm::kL1, Norm::kL2, Norm::kLinf}) {
    for (int d : {1, 2, 7}) {
      double prev_delta = 0;
      for (double delta : {1e-15, 1e-10, 1e-6, 1e-3}) {
        const double w = *CalibrateDeltaW8(Ball(q, d, 1.0), delta, 0.1);
        EXPECT_GT(w, prev_delta);
        prev_delta = w;
      }
      double prev_r = 0;
      for (double r : {0.1, 1.0, 10.0}) {
        const double w = *CalibrateDeltaW8(Ball(q, d, r), 1e-8, 0.1);
        EXPECT_GT(w, prev_r);
        prev_r = w;
      }
      double prev_omega = INFINITY;
      for (double omega : {0.001, 0.01, 0.1, 0.9}) {
        const double w = *CalibrateDeltaW8(Ball(q, d, 1.0), 1e-8, omega);
        EXPECT_LT(w, prev_omega);
        prev_omega = w;
      }
    }
  }
}

TEST(CalibrateDeltaW8Test, RejectsBadParameters) {
  const LqBall ball = Ball(Norm::kL2, 2, 1.0);
  EXPECT_FALSE(CalibrateDeltaW8(ball, 0.0, 0.1).ok());
  EXPECT_FALSE(CalibrateDeltaW8(ball, -1.0, 0.1).ok());
  EXPECT_FALSE(CalibrateDeltaW8(ball, 1e-6, 0.0).ok());
  EXPECT_FALSE(CalibrateDeltaW8(ball, 1e-6, 1.0).ok());
}

}  // namespace
}  // namespace purify

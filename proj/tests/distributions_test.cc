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

#include "purify/distributions.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"

namespace purify {
namespace {

TEST(DistributionsTest, Uniform01StaysOpen) {
  RngStream rng(1, 1);
  double lo = 1, hi = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = Uniform01(rng);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 1.0);
}

TEST(DistributionsTest, UniformIndexCoversRangeEvenly) {
  RngStream rng(1, 2);
  std::vector<int> counts(7);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[UniformIndex(rng, 7)];
  for (int c : counts) EXPECT_NEAR(c, n / 7.0, 5 * std::sqrt(n / 7.0));
}

TEST(DistributionsTest, LaplaceMomentsAndTail) {
  RngStream rng(1, 3);
  const int n = 200000;
  const double b = 1.7;
  double abs_sum = 0, sum = 0;
  int tail = 0;
  for (int i = 0; i < n; ++i) {
    const double x = Laplace(rng, b);
    sum += x;
    abs_sum += std::fabs(x);
    tail += x > 2 * b;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(abs_sum / n, b, 0.02);
  EXPECT_NEAR(static_cast<double>(tail) / n, 0.5 * std::exp(-2.0), 0.003);
}

TEST(DistributionsTest, GaussianMoments) {
  RngStream rng(1, 4);
  const int n = 200000;
  double sum = 0, sumsq = 0;
  int beyond = 0;
  for (int i = 0; i < n; ++i) {
    const double x = StandardGaussian(rng);
    sum += x;
    sumsq += x * x;
    beyond += x > 1.0;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sumsq / n, 1.0, 0.015);
  EXPECT_NEAR(static_cast<double>(beyond) / n,
              static_cast<double>(1 - oracle::Phi(1.0L)), 0.003);
}

TEST(DistributionsTest, NormalQuantileInvertsCdf) {
  for (double p : {1e-10, 0.025, 0.5, 0.975, 1 - 1e-9}) {
    EXPECT_NEAR(NormalCdf(NormalQuantile(p)), p, 1e-12 + 1e-9 * p);
  }
  EXPECT_NEAR(NormalQuantile(0.975), 1.959963984540054, 1e-9);
}

}  // namespace
}  // namespace purify

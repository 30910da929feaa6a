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

#include "purify/queries.h"

#include <cmath>

#include "gtest/gtest.h"
#include "oracles.h"
#include "purify/distributions.h"

namespace purify {
namespace {

TEST(EvalQueriesTest, ConstantAndPointMass) {
  RngStream rng(40, 0);
  std::vector<double> q(16);
  for (double& v : q) v = Uniform01(rng);
  auto w = *QueryWorkload::Create(4, {std::vector<double>(16, 1.0), q});
  auto data = HistogramDataset::Random(16, 50, rng);
  EXPECT_EQ((*EvalQueries(w, data))[0], 1.0);
  std::vector<std::int64_t> point(16, 0);
  point[9] = 7;
  EXPECT_DOUBLE_EQ((*EvalQueries(w, *HistogramDataset::Create(point)))[1], q[9]);
}

TEST(EvalQueriesTest, MatchesNaiveLoop) {
  RngStream rng(41, 0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::vector<double>> tables(3, std::vector<double>(16));
    for (auto& t : tables)
      for (double& v : t) v = Uniform01(rng);
    auto w = *QueryWorkload::Create(4, tables);
    auto data = HistogramDataset::Random(16, 97, rng);
    auto got = *EvalQueries(w, data);
    auto want = oracle::EvalQueriesNaive(tables, data.counts());
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(got[k], want[k], 1e-15);
    auto via_p = *EvalQueries(w, data.Distribution());
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(via_p[k], want[k], 1e-15);
  }
}

TEST(EvalQueriesTest, Validation) {
  EXPECT_FALSE(QueryWorkload::Create(2, {{0, 1, 2, 0}}).ok());
  EXPECT_FALSE(QueryWorkload::Create(2, {{0, 1, 0}}).ok());
  EXPECT_FALSE(QueryWorkload::Create(2, {}).ok());
  EXPECT_EQ(HistogramDataset::Create({1, -1}).status().code(),
            absl::StatusCode::kFailedPrecondition);
  auto w = *QueryWorkload::Create(1, {{0, 1}});
  EXPECT_FALSE(EvalQueries(w, *HistogramDataset::Create({1, 1, 1})).ok());
}

TEST(ExponentialMechanismTest, EqualScoresAreUniform) {
  RngStream rng(42, 0);
  std::vector<int> counts(5, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    ++counts[*ExponentialMechanism(std::vector<double>(5, 0.3), 1.0, 1.0, rng)];
  }
  for (int c : counts) EXPECT_NEAR(c / double(draws), 0.2, 0.01);
}

TEST(ExponentialMechanismTest, LargeEpsSelectsArgmax) {
  RngStream rng(43, 0);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    hits += *ExponentialMechanism({0.1, 0.5, 0.45, 0.2}, 1000.0, 1.0, rng) == 1;
  }
  EXPECT_GE(hits / 10000.0, 0.999);
}

TEST(ExponentialMechanismTest, FrequenciesMatchClosedForm) {
  RngStream rng(44, 0);
  for (int k : {2, 5, 8}) {
    std::vector<double> scores(k);
    for (double& s : scores) s = UniformReal(rng, -1, 3);
    const double eps0 = 1.3, sens = 0.7;
    std::vector<double> expect(k);
    double z = 0;
    for (int i = 0; i < k; ++i) z += expect[i] = std::exp(eps0 * scores[i] / (2 * sens));
    std::vector<int> counts(k, 0);
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
      ++counts[*ExponentialMechanism(scores, eps0, sens, rng)];
    }
    for (int i = 0; i < k; ++i) {
      const double p = expect[i] / z;
      EXPECT_NEAR(counts[i] / double(draws), p,
                  4.5 * std::sqrt(p * (1 - p) / draws));
    }
    if (k == 2) {
      // Odds ratio exp(eps0 g / (2 s)).
      const double odds = double(counts[0]) / counts[1];
      const double want =
          std::exp(eps0 * (scores[0] - scores[1]) / (2 * sens));
      EXPECT_NEAR(std::log(odds), std::log(want), 0.03);
    }
  }
}

TEST(ExponentialMechanismTest, Errors) {
  RngStream rng(45, 0);
  const double ninf = -std::numeric_limits<double>::infinity();
  EXPECT_EQ(ExponentialMechanism({ninf, ninf}, 1, 1, rng).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(*ExponentialMechanism({ninf, 0.0}, 1, 1, rng), 1u);
  EXPECT_FALSE(ExponentialMechanism({NAN}, 1, 1, rng).ok());
}

TEST(MwemTest, OneStepUpdateTiltsTowardHighCells) {
  // 4-cell universe, q = indicator of cells {2, 3}; data all in cell 3.
  auto w = *QueryWorkload::Create(2, {{0, 0, 1, 1}});
  auto data = *HistogramDataset::Create({0, 0, 0, 10});
  MwemOptions options;
  options.noise_multiplier = 0.0;
  options.record_distributions = true;
  RngStream rng(46, 0);
  auto r = *Mwem(data, w, 1, 1.0, rng, options);
  // q(D) = 1 > q(p0) = 1/2, step 1/4: weights e^{1/4} on cells 2, 3.
  const double e = std::exp(0.25);
  const auto& p = r.distributions[0];
  EXPECT_NEAR(p[0], 1 / (2 + 2 * e), 1e-15);
  EXPECT_NEAR(p[3], e / (2 + 2 * e), 1e-15);
  EXPECT_GT(p[3], p[0]);
  EXPECT_NEAR(r.synthetic[3], 10 * p[3], 1e-12);
  // Reversed: q(D) = 0 < 1/2 tilts away.
  auto away = *Mwem(*HistogramDataset::Create({10, 0, 0, 0}), w, 1, 1.0, rng,
                    options);
  EXPECT_LT(away.distributions[0][3], away.distributions[0][0]);
}

TEST(MwemTest, DistributionsStayNormalized) {
  RngStream rng(47, 0);
  auto w = QueryWorkload::RandomBinary(5, 20, rng);
  auto data = HistogramDataset::Random(32, 500, rng);
  MwemOptions options;
  options.record_distributions = true;
  auto r = *Mwem(data, w, 30, 0.5, rng, options);
  ASSERT_EQ(r.distributions.size(), 30u);
  for (const auto& p : r.distributions) {
    double s = 0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  double total = 0;
  for (double v : r.synthetic) total += v;
  EXPECT_NEAR(total, 500.0, 1e-9);
}

TEST(MwemTest, UpdateIsScaleFree) {
  RngStream rng(48, 0);
  std::vector<double> log_w(16), q(16);
  for (int i = 0; i < 16; ++i) {
    log_w[i] = UniformReal(rng, -3, 3);
    q[i] = Uniform01(rng);
  }
  auto shifted = log_w;
  for (double& v : shifted) v += 123.456;
  MultiplicativeWeightsUpdate(log_w, q, 0.7, 0.4);
  MultiplicativeWeightsUpdate(shifted, q, 0.7, 0.4);
  auto a = NormalizeLogWeights(log_w), b = NormalizeLogWeights(shifted);
  for (int i = 0; i < 16; ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
  // Huge log weights do not overflow.
  std::vector<double> big(4, 1e300);
  big[0] = 1e300 + 1e285;
  auto p = NormalizeLogWeights(big);
  EXPECT_TRUE(std::isfinite(p[0]));
}

TEST(MwemTest, ErrorDecreasesWithIterations) {
  std::vector<double> err;
  for (std::int64_t T : {1, 5, 20}) {
    double total = 0;
    for (int s = 0; s < 20; ++s) {
      RngStream gen(49, s);
      auto w = QueryWorkload::RandomBinary(5, 20, gen);
      auto data = HistogramDataset::Random(32, 1000, gen);
      RngStream rng(50, 100 * T + s);
      auto r = *Mwem(data, w, T, 1.0, rng);
      auto truth = *EvalQueries(w, data);
      std::vector<double> p(32);
      for (int x = 0; x < 32; ++x) p[x] = r.synthetic[x] / 1000.0;
      total += LinfDistance(truth, *EvalQueries(w, p));
    }
    err.push_back(total / 20);
  }
  EXPECT_GT(err[0], err[1]);
  EXPECT_GT(err[1], err[2]);
}

TEST(PureMwemTest, TupleEncodingRoundTrip) {
  auto bits = *EncodeTuple({3, 15, 0}, 4);
  ASSERT_EQ(bits.size(), 12u);
  EXPECT_EQ(*DecodeTuple(bits, 4), (std::vector<std::uint64_t>{3, 15, 0}));
  EXPECT_FALSE(EncodeTuple({16}, 4).ok());
  EXPECT_FALSE(DecodeTuple(bits, 5).ok());
}

TEST(PureMwemTest, PlanAndBitBudget) {
  auto plan = *MakePureMwemPlan(6400, 4, 1.0);
  EXPECT_EQ(plan.T, 500);
  EXPECT_EQ(plan.m, static_cast<std::int64_t>(std::ceil(std::pow(1600.0, 2.0 / 3))));
  EXPECT_EQ(plan.bits, plan.m * 4);
  const double md = plan.bits;
  EXPECT_NEAR(plan.delta.log(), -3 * md * std::log(2 * md), 1e-6);
  EXPECT_NEAR(plan.rho, 1.0 / (16 * -plan.delta.log()), 1e-18);
  PureMwemOptions options;
  options.bit_budget = 100;
  EXPECT_EQ(MakePureMwemPlan(6400, 4, 1.0, options).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(PureMwemTest, SamplingGapAndValidItems) {
  for (int s = 0; s < 10; ++s) {
    RngStream gen(51, s);
    auto w = QueryWorkload::RandomBinary(4, 10, gen);
    auto data = HistogramDataset::Random(16, 800, gen);
    RngStream rng(52, s);
    auto r = *PureMwem(data, w, 1.0, rng);
    ASSERT_EQ(static_cast<std::int64_t>(r.items.size()), r.plan.m);
    for (auto u : r.items) EXPECT_LT(u, 16u);
    auto truth = *EvalQueries(w, data);
    std::vector<double> p(16);
    for (int x = 0; x < 16; ++x) p[x] = r.synthetic[x] / data.n();
    const double err_mwem = LinfDistance(truth, *EvalQueries(w, p));
    const double err_pure = LinfDistance(truth, *EvalQueriesOnItems(w, r.items));
    const double bound =
        2 * std::sqrt(std::log(2.0 * 10 * 800) / (2.0 * r.plan.m));
    EXPECT_LE(std::fabs(err_pure - err_mwem), bound);
    EXPECT_FALSE(r.mixed);
    EXPECT_EQ(r.items, r.sampled);
  }
}

TEST(PureMwemTest, ErrorDecreasesWithN) {
  std::vector<double> err;
  for (std::int64_t n : {100, 800, 6400}) {
    double total = 0;
    for (int s = 0; s < 10; ++s) {
      RngStream gen(53, s);
      auto w = QueryWorkload::RandomBinary(4, 10, gen);
      auto data = HistogramDataset::Random(16, n, gen);
      RngStream rng(54, 1000 * n + s);
      auto r = *PureMwem(data, w, 1.0, rng);
      total += LinfDistance(*EvalQueries(w, data), *EvalQueriesOnItems(w, r.items));
    }
    err.push_back(total / 10);
  }
  EXPECT_GT(err[0], err[1]);
  EXPECT_GT(err[1], err[2]);
}

}  // namespace
}  // namespace purify

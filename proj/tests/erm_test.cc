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

#include "purify/erm.h"

#include <cmath>
#include <memory>

#include "gtest/gtest.h"
#include "purify/distributions.h"

namespace purify {
namespace {

std::unique_ptr<QuadraticProblem> Quadratic(int d, double radius) {
  return *QuadraticProblem::Create(*LqBall::Centered(Norm::kL2, d, radius));
}

SgdHyperParams NoiseFree(double gamma, std::int64_t T, double eta) {
  SgdHyperParams p;
  p.gamma = gamma;
  p.sigma2 = 0.0;
  p.T = T;
  p.eta = eta;
  return p;
}

template <typename Problem>
void CheckGradientAgainstFiniteDifferences(const Problem& problem,
                                           const Dataset& data,
                                           RngStream& rng) {
  const int d = problem.dim();
  for (int probe = 0; probe < 20; ++probe) {
    const std::vector<double> theta = SampleUniformBall(problem.domain(), rng);
    const Example& e = data[UniformIndex(rng, data.size())];
    std::vector<double> g(d, 0.0);
    problem.AddGradient(theta, e, 1.0, g);
    EXPECT_LE(NormOf(g, Norm::kL2), problem.lipschitz() * (1 + 1e-12));
    EXPECT_LE(NormOf(g, Norm::kLinf), problem.lipschitz_l1() * (1 + 1e-12));
    for (int i = 0; i < d; ++i) {
      const double h = 1e-6;
      std::vector<double> up = theta, down = theta;
      up[i] += h;
      down[i] -= h;
      const double fd = (problem.Loss(up, e) - problem.Loss(down, e)) / (2 * h);
      EXPECT_NEAR(g[i], fd, 1e-5 * std::max(1.0, std::fabs(fd)));
    }
  }
}

TEST(ProblemTest, QuadraticGradientMatchesFiniteDifferences) {
  RngStream rng(1, 0);
  auto problem = Quadratic(4, 1.5);
  Dataset data = MakeQuadraticData(problem->domain(), 50, 0.5, rng);
  CheckGradientAgainstFiniteDifferences(*problem, data, rng);
}

TEST(ProblemTest, LogisticGradientMatchesFiniteDifferences) {
  RngStream rng(2, 0);
  auto problem =
      *LogisticProblem::Create(*LqBall::Centered(Norm::kL2, 3, 2.0), 1.5);
  Dataset data = MakeLogisticData(3, 50, 1.5, rng);
  CheckGradientAgainstFiniteDifferences(*problem, data, rng);
}

TEST(ProblemTest, ProjectionIsNonExpansive) {
  RngStream rng(3, 0);
  auto problem = Quadratic(5, 1.0);
  for (int i = 0; i < 1000; ++i) {
    auto a = GaussianVector(rng, 5, 2.0), b = GaussianVector(rng, 5, 2.0);
    EXPECT_LE(Distance(problem->Project(a), problem->Project(b), Norm::kL2),
              Distance(a, b, Norm::kL2) * (1 + 1e-12));
  }
}

TEST(DpsgdTest, NoiseFreeSingleFullStep) {
  RngStream rng(4, 0);
  auto problem = Quadratic(1, 10.0);
  Dataset data = {{{1.0}, 0}, {{2.0}, 0}, {{6.0}, 0}};
  DpsgdOptions options;
  options.theta0 = std::vector<double>{0.5};
  options.clip_gradients = false;
  auto r = *Dpsgd(*problem, data, NoiseFree(1.0, 1, 0.1), rng, options);
  // Sum of gradients at 0.5: (0.5-1) + (0.5-2) + (0.5-6) = -7.5.
  EXPECT_DOUBLE_EQ(r.theta[0], 0.5 + 0.1 * 7.5);
  EXPECT_EQ(r.batch_size, 3);
}

TEST(DpsgdTest, NoiseFreeConvergesToMinimizer) {
  RngStream rng(5, 0);
  auto problem = Quadratic(3, 1.0);
  Dataset data = MakeQuadraticData(problem->domain(), 200, 0.3, rng);
  auto r = *Dpsgd(*problem, data, NoiseFree(1.0, 2000, 1.0 / 400), rng);
  const auto opt = problem->Minimizer(data);
  EXPECT_LE(problem->EmpiricalRisk(r.theta, data) -
                problem->EmpiricalRisk(opt, data),
            1e-4);
}

TEST(DpsgdTest, IteratesStayInDomain) {
  RngStream rng(6, 0);
  auto problem = Quadratic(4, 0.5);
  Dataset data = MakeQuadraticData(problem->domain(), 100, 1.0, rng);
  auto p = *ComputeSgdHyperParams(100, 4, 1.0, 1e-5, problem->lipschitz(), 1.0);
  for (int s = 0; s < 20; ++s) {
    RngStream r(7, s);
    auto out = *Dpsgd(*problem, data, p, r);
    EXPECT_TRUE(problem->domain().Contains(out.theta));
  }
}

TEST(DpsgdTest, StronglyConvexWeightsSumToOne) {
  for (std::int64_t T : {1, 2, 7, 1000, 123457}) {
    long double total = 0;
    for (std::int64_t t = 1; t <= T; ++t) {
      total += 2.0 * t / (static_cast<double>(T) * (T + 1.0));
    }
    EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-12);
  }
  // A constant trajectory averages to itself.
  RngStream rng(8, 0);
  auto problem = Quadratic(2, 1.0);
  Dataset data = {{{0.3, -0.2}, 0}};
  SgdHyperParams p = NoiseFree(1.0, 50, 0.0);
  p.convexity = Convexity::kStronglyConvex;
  p.lambda = 1e300;
  DpsgdOptions options;
  options.theta0 = std::vector<double>{0.3, -0.2};
  auto r = *Dpsgd(*problem, data, p, rng, options);
  EXPECT_NEAR(r.theta[0], 0.3, 1e-12);
  EXPECT_NEAR(r.theta[1], -0.2, 1e-12);
}

TEST(DpsgdTest, RejectsBadData) {
  RngStream rng(9, 0);
  auto problem = Quadratic(2, 1.0);
  EXPECT_EQ(Dpsgd(*problem, {}, NoiseFree(1, 1, 1), rng).status().code(),
            absl::StatusCode::kFailedPrecondition);
  Dataset bad = {{{NAN, 0.0}, 0}};
  EXPECT_EQ(Dpsgd(*problem, bad, NoiseFree(1, 1, 1), rng).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(DpsgdTest, DeterministicUnderSeed) {
  RngStream data_rng(10, 0);
  auto problem = Quadratic(3, 1.0);
  Dataset data = MakeQuadraticData(problem->domain(), 300, 0.4, data_rng);
  RngStream a(11, 0), b(11, 0);
  auto ra = *PurifiedDpsgd(*problem, data, 1.0, a);
  auto rb = *PurifiedDpsgd(*problem, data, 1.0, b);
  EXPECT_EQ(ra.theta_pure, rb.theta_pure);
  EXPECT_EQ(ra.theta_apx, rb.theta_apx);
}

TEST(LaplaceGdTest, NoiseFreeMatchesProjectedGd) {
  RngStream rng(12, 0);
  auto problem = Quadratic(4, 1.0);
  Dataset data = MakeQuadraticData(problem->domain(), 100, 0.5, rng);
  LaplaceGdOptions options;
  options.noise_multiplier = 0.0;
  options.delta1 = 2.0;
  auto r = *LaplaceNoisyGd(*problem, data, 1.0, rng, options);
  // Independent trajectory.
  std::vector<double> theta(4, 0.0), avg(4, 0.0);
  for (std::int64_t t = 0; t < r.params.T; ++t) {
    std::vector<double> g(4, 0.0);
    for (const auto& e : data) problem->AddGradient(theta, e, 1.0, g);
    for (int i = 0; i < 4; ++i) theta[i] -= r.params.eta * g[i];
    theta = ClipToBall(theta, problem->domain());
    for (int i = 0; i < 4; ++i) avg[i] += theta[i] / r.params.T;
  }
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.theta[i], avg[i], 1e-12);
}

TEST(LaplaceGdTest, ExcessRiskScalesLikeSqrtDOverNEps) {
  // Ratio of excess risk to sqrt(d / (n eps)) stays within a factor 3 band.
  std::vector<double> ratios;
  for (auto [n, eps] : {std::pair{200, 1.0}, {800, 1.0}, {800, 0.25}}) {
    const int d = 4;
    auto problem = Quadratic(d, 1.0);
    double total = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
      RngStream rng(13, s);
      Dataset data = MakeQuadraticData(problem->domain(), n, 0.5, rng);
      auto r = *LaplaceNoisyGd(*problem, data, eps, rng);
      total += problem->EmpiricalRisk(r.theta, data) -
               problem->EmpiricalRisk(problem->Minimizer(data), data);
    }
    ratios.push_back(total / seeds / std::sqrt(d / (n * eps)));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_LE(*hi / *lo, 3.0);
}

TEST(PurifiedDpsgdTest, DisplacementWithinUtilityBound) {
  const int n = 50, d = 5;
  auto problem = Quadratic(d, 0.5);
  RngStream data_rng(14, 0);
  Dataset data = MakeQuadraticData(problem->domain(), n, 0.3, data_rng);
  double total = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(15, t);
    auto r = *PurifiedDpsgd(*problem, data, 1.0, rng);
    EXPECT_TRUE(problem->domain().Contains(r.theta_pure));
    total += Distance(r.theta_pure, r.theta_apx, Norm::kL2);
  }
  EXPECT_LE(total / trials, 3 * (1.0 / (n * n) + 1.0 / (n * n)));
}

TEST(PurifiedDpsgdTest, RejectsNonL2Domain) {
  RngStream rng(16, 0);
  auto problem = *QuadraticProblem::Create(*LqBall::Centered(Norm::kL1, 2, 1.0));
  Dataset data = {{{0.1, 0.1}, 0}, {{0.0, 0.2}, 0}};
  EXPECT_FALSE(PurifiedDpsgd(*problem, data, 1.0, rng).ok());
}

}  // namespace
}  // namespace purify

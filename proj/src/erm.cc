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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "purify/distributions.h"

namespace purify {
namespace {

double L2Norm(const std::vector<double>& v) { return NormOf(v, Norm::kL2); }

// l2 diameter and l-infinity diameter of the domain.
std::pair<double, double> Diameters(const LqBall& ball) {
  const double two_r = ball.diameter();
  switch (ball.q()) {
    case Norm::kL1:
    case Norm::kL2:
      return {two_r, two_r};
    case Norm::kLinf:
      return {two_r * std::sqrt(static_cast<double>(ball.dim())), two_r};
  }
  return {two_r, two_r};
}

absl::Status CheckData(const ConvexProblem& problem, const Dataset& data) {
  if (data.empty()) return absl::FailedPreconditionError("empty dataset");
  for (const Example& e : data) {
    if (static_cast<int>(e.x.size()) != problem.dim()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "example dimension ", e.x.size(), " != problem dimension ",
          problem.dim()));
    }
  }
  return absl::OkStatus();
}

// Adds the gradient at `example`, clipped to l2 norm `clip` when positive.
absl::Status AccumulateGradient(const ConvexProblem& problem,
                                const std::vector<double>& theta,
                                const Example& example, double clip,
                                std::vector<double>& scratch,
                                std::vector<double>& sum) {
  std::fill(scratch.begin(), scratch.end(), 0.0);
  problem.AddGradient(theta, example, 1.0, scratch);
  double norm = 0.0;
  for (double g : scratch) {
    if (!std::isfinite(g)) {
      return absl::FailedPreconditionError("non-finite gradient");
    }
    norm += g * g;
  }
  norm = std::sqrt(norm);
  const double s = (clip > 0.0 && norm > clip) ? clip / norm : 1.0;
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += s * scratch[i];
  return absl::OkStatus();
}

}  // namespace

double ConvexProblem::EmpiricalRisk(const std::vector<double>& theta,
                                    const Dataset& data) const {
  double total = 0.0;
  for (const Example& e : data) total += Loss(theta, e);
  return total / static_cast<double>(data.size());
}

std::vector<double> ConvexProblem::EmpiricalGradient(
    const std::vector<double>& theta, const Dataset& data) const {
  std::vector<double> g(dim(), 0.0);
  const double w = 1.0 / static_cast<double>(data.size());
  for (const Example& e : data) AddGradient(theta, e, w, g);
  return g;
}

std::vector<double> ConvexProblem::Project(
    const std::vector<double>& theta) const {
  return ClipToBall(theta, domain_);
}

absl::StatusOr<std::unique_ptr<QuadraticProblem>> QuadraticProblem::Create(
    LqBall domain) {
  const auto [l2, linf] = Diameters(domain);
  return std::unique_ptr<QuadraticProblem>(
      new QuadraticProblem(std::move(domain), l2, linf));
}

QuadraticProblem::QuadraticProblem(LqBall domain, double lipschitz,
                                   double lipschitz_l1)
    : ConvexProblem(std::move(domain), lipschitz, lipschitz_l1, 1.0, 1.0) {}

double QuadraticProblem::Loss(const std::vector<double>& theta,
                              const Example& example) const {
  double s = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double diff = theta[i] - example.x[i];
    s += diff * diff;
  }
  return 0.5 * s;
}

void QuadraticProblem::AddGradient(const std::vector<double>& theta,
                                   const Example& example, double scale,
                                   std::vector<double>& out) const {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out[i] += scale * (theta[i] - example.x[i]);
  }
}

std::vector<double> QuadraticProblem::Minimizer(const Dataset& data) const {
  std::vector<double> mean(dim(), 0.0);
  for (const Example& e : data) {
    for (int i = 0; i < dim(); ++i) mean[i] += e.x[i];
  }
  for (double& v : mean) v /= static_cast<double>(data.size());
  if (domain().q() == Norm::kL2 || domain().q() == Norm::kLinf) {
    return Project(mean);
  }
  return ReferenceMinimizer(*this, data);
}

absl::StatusOr<std::unique_ptr<LogisticProblem>> LogisticProblem::Create(
    LqBall domain, double feature_bound) {
  if (!(feature_bound > 0.0)) {
    return absl::InvalidArgumentError("feature bound must be positive");
  }
  return std::unique_ptr<LogisticProblem>(
      new LogisticProblem(std::move(domain), feature_bound));
}

LogisticProblem::LogisticProblem(LqBall domain, double feature_bound)
    : ConvexProblem(std::move(domain), feature_bound, feature_bound,
                    std::nullopt, feature_bound * feature_bound / 4.0) {}

double LogisticProblem::Loss(const std::vector<double>& theta,
                             const Example& example) const {
  double margin = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    margin += theta[i] * example.x[i];
  }
  const double z = -example.y * margin;
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void LogisticProblem::AddGradient(const std::vector<double>& theta,
                                  const Example& example, double scale,
                                  std::vector<double>& out) const {
  double margin = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    margin += theta[i] * example.x[i];
  }
  const double z = example.y * margin;
  // d/dm ln(1 + e^{-y m}) = -y / (1 + e^{y m}).
  const double coef = -example.y / (1.0 + std::exp(z));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out[i] += scale * coef * example.x[i];
  }
}

Dataset MakeQuadraticData(const LqBall& domain, std::int64_t n, double spread,
                          RngStream& rng) {
  std::vector<double> center = SampleUniformBall(domain, rng);
  for (int i = 0; i < domain.dim(); ++i) {
    center[i] = domain.center()[i] + 0.5 * (center[i] - domain.center()[i]);
  }
  Dataset data(static_cast<std::size_t>(n));
  for (Example& e : data) {
    e.x = GaussianVector(rng, domain.dim(), spread);
    for (int i = 0; i < domain.dim(); ++i) e.x[i] += center[i];
    e.x = ClipToBall(e.x, domain);
  }
  return data;
}

Dataset MakeLogisticData(int d, std::int64_t n, double feature_bound,
                         RngStream& rng) {
  std::vector<double> planted = GaussianVector(rng, d, 1.0);
  const double pn = L2Norm(planted);
  for (double& v : planted) v *= 2.0 / pn;
  const LqBall features = *LqBall::Centered(Norm::kL2, d, feature_bound);
  Dataset data(static_cast<std::size_t>(n));
  for (Example& e : data) {
    e.x = SampleUniformBall(features, rng);
    double margin = 0.0;
    for (int i = 0; i < d; ++i) margin += planted[i] * e.x[i];
    e.y = Bernoulli(rng, 1.0 / (1.0 + std::exp(-margin))) ? 1.0 : -1.0;
  }
  return data;
}

std::vector<double> ReferenceMinimizer(const ConvexProblem& problem,
                                       const Dataset& data, int iterations) {
  const double beta = problem.smoothness().value_or(1.0);
  const double step = 1.0 / beta;
  std::vector<double> theta = problem.domain().center();
  for (int t = 0; t < iterations; ++t) {
    std::vector<double> g = problem.EmpiricalGradient(theta, data);
    for (int i = 0; i < problem.dim(); ++i) theta[i] -= step * g[i];
    theta = problem.Project(theta);
  }
  return theta;
}

absl::StatusOr<DpsgdResult> Dpsgd(const ConvexProblem& problem,
                                  const Dataset& data,
                                  const SgdHyperParams& params, RngStream& rng,
                                  const DpsgdOptions& options) {
  if (absl::Status s = CheckData(problem, data); !s.ok()) return s;
  if (params.T < 1 || !(params.gamma > 0.0 && params.gamma <= 1.0) ||
      !(params.sigma2 >= 0.0)) {
    return absl::InvalidArgumentError("invalid SGD hyperparameters");
  }
  const int d = problem.dim();
  const std::int64_t n = static_cast<std::int64_t>(data.size());
  const std::int64_t batch = std::clamp<std::int64_t>(
      std::llround(params.gamma * static_cast<double>(n)), 1, n);
  const double sigma = std::sqrt(params.sigma2) * options.noise_multiplier;
  const double clip = options.clip_gradients ? problem.lipschitz() : 0.0;
  const bool strongly_convex = params.convexity == Convexity::kStronglyConvex;

  std::vector<double> theta =
      options.theta0.value_or(problem.domain().center());
  if (static_cast<int>(theta.size()) != d) {
    return absl::InvalidArgumentError("theta0 has the wrong dimension");
  }
  std::vector<std::int64_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> sum(d), scratch(d), average(d, 0.0);
  const double T = static_cast<double>(params.T);
  for (std::int64_t t = 0; t < params.T; ++t) {
    // Partial Fisher-Yates: the first `batch` slots are a uniform subset.
    for (std::int64_t i = 0; i < batch; ++i) {
      const std::int64_t j =
          i + static_cast<std::int64_t>(UniformIndex(rng, n - i));
      std::swap(perm[i], perm[j]);
    }
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::int64_t i = 0; i < batch; ++i) {
      absl::Status s =
          AccumulateGradient(problem, theta, data[perm[i]], clip, scratch, sum);
      if (!s.ok()) return s;
    }
    const double eta = params.StepSize(t, n);
    for (int i = 0; i < d; ++i) {
      const double noise = sigma > 0.0 ? sigma * StandardGaussian(rng) : 0.0;
      theta[i] -= eta * (sum[i] + noise) / params.gamma;
    }
    theta = problem.Project(theta);
    const double w = strongly_convex
                         ? 2.0 * static_cast<double>(t + 1) / (T * (T + 1.0))
                         : 1.0 / T;
    for (int i = 0; i < d; ++i) average[i] += w * theta[i];
  }
  DpsgdResult result;
  result.theta = problem.Project(average);
  result.iterations = params.T;
  result.batch_size = batch;
  return result;
}

absl::StatusOr<LaplaceGdResult> LaplaceNoisyGd(const ConvexProblem& problem,
                                               const Dataset& data, double eps,
                                               RngStream& rng,
                                               const LaplaceGdOptions& options) {
  if (absl::Status s = CheckData(problem, data); !s.ok()) return s;
  const int d = problem.dim();
  const std::int64_t n = static_cast<std::int64_t>(data.size());
  auto params = ComputeLaplaceGdParams(n, d, eps, problem.lipschitz(),
                                       Diameters(problem.domain()).first,
                                       options.delta1);
  if (!params.ok()) return params.status();
  const double clip = options.clip_gradients ? problem.lipschitz() : 0.0;
  const double scale = params->noise_scale * options.noise_multiplier;
  std::vector<double> theta =
      options.theta0.value_or(problem.domain().center());
  std::vector<double> sum(d), scratch(d), average(d, 0.0);
  const double T = static_cast<double>(params->T);
  for (std::int64_t t = 0; t < params->T; ++t) {
    std::fill(sum.begin(), sum.end(), 0.0);
    for (const Example& e : data) {
      absl::Status s = AccumulateGradient(problem, theta, e, clip, scratch, sum);
      if (!s.ok()) return s;
    }
    for (int i = 0; i < d; ++i) {
      const double noise = scale > 0.0 ? Laplace(rng, scale) : 0.0;
      theta[i] -= params->eta * (sum[i] + noise);
    }
    theta = problem.Project(theta);
    for (int i = 0; i < d; ++i) average[i] += theta[i] / T;
  }
  LaplaceGdResult result;
  result.theta = problem.Project(average);
  result.params = *params;
  return result;
}

absl::StatusOr<PurifiedDpsgdResult> PurifiedDpsgd(
    const ConvexProblem& problem, const Dataset& data, double eps,
    RngStream& rng, const PurifiedDpsgdOptions& options) {
  if (problem.domain().q() != Norm::kL2) {
    return absl::InvalidArgumentError("purified DP-SGD needs an l2 domain");
  }
  if (absl::Status s = CheckData(problem, data); !s.ok()) return s;
  const int d = problem.dim();
  const std::int64_t n = static_cast<std::int64_t>(data.size());
  const double C = problem.domain().diameter();
  auto pp = PurifyHyperParamsSgd(n, d, C);
  if (!pp.ok()) return pp.status();
  const LogProbability delta = pp->delta;
  if (options.convexity == Convexity::kStronglyConvex &&
      !problem.strong_convexity().has_value()) {
    return absl::InvalidArgumentError("problem is not strongly convex");
  }
  auto sgd = ComputeSgdHyperParams(n, d, eps, delta, problem.lipschitz(), C,
                                   options.convexity,
                                   problem.strong_convexity().value_or(0.0));
  if (!sgd.ok()) return sgd.status();
  RngStream sgd_rng = rng.Substream(0);
  RngStream purify_rng = rng.Substream(1);
  auto apx = Dpsgd(problem, data, *sgd, sgd_rng, options.sgd);
  if (!apx.ok()) return apx.status();
  auto params = MakePurifyParams(problem.domain(), eps, eps, delta, pp->omega);
  if (!params.ok()) return params.status();
  auto pure = Purify(apx->theta, problem.domain(), *params, purify_rng);
  if (!pure.ok()) return pure.status();
  PurifiedDpsgdResult result;
  result.theta_apx = apx->theta;
  result.theta_pure =
      options.clip_output ? problem.Project(pure->x) : pure->x;
  result.sgd_params = *sgd;
  result.purify_params = *params;
  result.mixed = pure->mixed;
  return result;
}

}  // namespace purify

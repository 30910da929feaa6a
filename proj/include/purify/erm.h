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

#ifndef PURIFY_ERM_H_
#define PURIFY_ERM_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "purify/accounting.h"
#include "purify/ball.h"
#include "purify/purify.h"
#include "purify/rng.h"

namespace purify {

struct Example {
  std::vector<double> x;
  double y = 0.0;
};

using Dataset = std::vector<Example>;

// Per-example loss f(theta; x) with its gradient, over a bounded domain.
class ConvexProblem {
 public:
  virtual ~ConvexProblem() = default;

  virtual double Loss(const std::vector<double>& theta,
                      const Example& example) const = 0;
  // out += scale * grad f(theta; example).
  virtual void AddGradient(const std::vector<double>& theta,
                           const Example& example, double scale,
                           std::vector<double>& out) const = 0;

  const LqBall& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  // l2 Lipschitz constant over the domain.
  double lipschitz() const { return lipschitz_; }
  // Bound on ||grad f||_inf, the Lipschitz constant with respect to l1.
  double lipschitz_l1() const { return lipschitz_l1_; }
  std::optional<double> strong_convexity() const { return strong_convexity_; }
  std::optional<double> smoothness() const { return smoothness_; }

  // (1/n) sum f(theta; x_i).
  double EmpiricalRisk(const std::vector<double>& theta,
                       const Dataset& data) const;
  // (1/n) sum grad f(theta; x_i).
  std::vector<double> EmpiricalGradient(const std::vector<double>& theta,
                                        const Dataset& data) const;
  // Projection onto the domain (Euclidean for l2 balls, the clip otherwise).
  std::vector<double> Project(const std::vector<double>& theta) const;

 protected:
  ConvexProblem(LqBall domain, double lipschitz, double lipschitz_l1,
                std::optional<double> strong_convexity,
                std::optional<double> smoothness)
      : domain_(std::move(domain)),
        lipschitz_(lipschitz),
        lipschitz_l1_(lipschitz_l1),
        strong_convexity_(strong_convexity),
        smoothness_(smoothness) {}

 private:
  LqBall domain_;
  double lipschitz_;
  double lipschitz_l1_;
  std::optional<double> strong_convexity_;
  std::optional<double> smoothness_;
};

// f(theta; x) = 1/2 ||theta - x||_2^2 with data inside the domain. The
// empirical minimizer is the data mean.
class QuadraticProblem : public ConvexProblem {
 public:
  // Data must lie in `domain`; L is the l2 diameter of the domain.
  static absl::StatusOr<std::unique_ptr<QuadraticProblem>> Create(
      LqBall domain);

  double Loss(const std::vector<double>& theta,
              const Example& example) const override;
  void AddGradient(const std::vector<double>& theta, const Example& example,
                   double scale, std::vector<double>& out) const override;

  // argmin over the domain of the empirical risk.
  std::vector<double> Minimizer(const Dataset& data) const;

 private:
  QuadraticProblem(LqBall domain, double lipschitz, double lipschitz_l1);
};

// f(theta; (x, y)) = ln(1 + exp(-y <theta, x>)) with ||x||_2 <= feature_bound
// and y in {-1, +1}.
class LogisticProblem : public ConvexProblem {
 public:
  static absl::StatusOr<std::unique_ptr<LogisticProblem>> Create(
      LqBall domain, double feature_bound);

  double Loss(const std::vector<double>& theta,
              const Example& example) const override;
  void AddGradient(const std::vector<double>& theta, const Example& example,
                   double scale, std::vector<double>& out) const override;

 private:
  LogisticProblem(LqBall domain, double feature_bound);
};

// Points drawn around a random center inside the domain and clipped to it.
Dataset MakeQuadraticData(const LqBall& domain, std::int64_t n, double spread,
                          RngStream& rng);
// Features uniform in the l2 ball of radius feature_bound; labels from a
// planted logistic model.
Dataset MakeLogisticData(int d, std::int64_t n, double feature_bound,
                         RngStream& rng);

// Minimizes the empirical risk by projected gradient descent; used as the
// non-private reference optimum.
std::vector<double> ReferenceMinimizer(const ConvexProblem& problem,
                                       const Dataset& data,
                                       int iterations = 5000);

struct DpsgdOptions {
  // Per-example l2 clipping of gradients at the Lipschitz constant.
  bool clip_gradients = true;
  // Defaults to the domain center.
  std::optional<std::vector<double>> theta0;
  // Multiplies the Gaussian noise; 0 gives noise-free SGD.
  double noise_multiplier = 1.0;
};

struct DpsgdResult {
  std::vector<double> theta;
  std::int64_t iterations = 0;
  std::int64_t batch_size = 0;
};

absl::StatusOr<DpsgdResult> Dpsgd(const ConvexProblem& problem,
                                  const Dataset& data,
                                  const SgdHyperParams& params, RngStream& rng,
                                  const DpsgdOptions& options = {});

struct LaplaceGdOptions {
  // l1 gradient sensitivity; 0 selects sqrt(d) L.
  double delta1 = 0.0;
  double noise_multiplier = 1.0;
  bool clip_gradients = true;
  std::optional<std::vector<double>> theta0;
};

struct LaplaceGdResult {
  std::vector<double> theta;
  LaplaceGdParams params;
};

// Full-batch projected gradient descent with Laplace noise; eps-pure DP.
absl::StatusOr<LaplaceGdResult> LaplaceNoisyGd(
    const ConvexProblem& problem, const Dataset& data, double eps,
    RngStream& rng, const LaplaceGdOptions& options = {});

struct PurifiedDpsgdOptions {
  DpsgdOptions sgd;
  // Clip the purified output back into the domain.
  bool clip_output = true;
  Convexity convexity = Convexity::kConvex;
};

struct PurifiedDpsgdResult {
  std::vector<double> theta_pure;
  std::vector<double> theta_apx;
  SgdHyperParams sgd_params;
  PurifyParams purify_params;
  bool mixed = false;
};

// DP-SGD at (eps, delta) with omega = 1/n^2 and delta = 2 omega /
// (16 C d n^2)^d, then purification with eps' = eps. The domain must be an
// l2 ball.
absl::StatusOr<PurifiedDpsgdResult> PurifiedDpsgd(
    const ConvexProblem& problem, const Dataset& data, double eps,
    RngStream& rng, const PurifiedDpsgdOptions& options = {});

}  // namespace purify

#endif  // PURIFY_ERM_H_

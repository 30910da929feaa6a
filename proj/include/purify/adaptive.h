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

#ifndef PURIFY_ADAPTIVE_H_
#define PURIFY_ADAPTIVE_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "purify/ball.h"
#include "purify/log_probability.h"
#include "purify/purify.h"
#include "purify/rng.h"

namespace purify {

// Rows of real features; neighbors differ by replacing one row.
using RealDataset = std::vector<std::vector<double>>;

inline constexpr std::int64_t kInfiniteDistance =
    std::numeric_limits<std::int64_t>::max();

struct QuerySpec {
  std::function<std::vector<double>(const RealDataset&)> query;
  // Optional. Max l2 change of the query over neighbors.
  std::function<double(const RealDataset&)> local_sensitivity;
  // Optional. Smallest Hamming distance to a dataset whose local sensitivity
  // exceeds beta.
  std::function<std::int64_t(const RealDataset&, double beta)>
      distance_to_violation;
  std::optional<LqBall> domain;
};

// Lower median of one-dimensional data on [lo, hi]. Values outside the
// interval are clamped. Domain is the interval as an l_inf ball.
absl::StatusOr<QuerySpec> MedianQuerySpec(double lo, double hi);

// Sum of rows clipped to the unit l2 ball in R^d, for datasets of n rows.
// Local sensitivity 1 + max_i ||x_i||_2 has global sensitivity 1. Domain is
// the l2 ball of radius n.
absl::StatusOr<QuerySpec> SumQuerySpec(int d, std::int64_t n);

// log(1/delta) / eps.
double PtrThreshold(double eps, LogProbability delta);

struct PtrOptions {
  double test_noise_multiplier = 1.0;
  double release_noise_multiplier = 1.0;
};

struct PtrResult {
  // Empty on the bottom branch.
  std::optional<std::vector<double>> value;
  std::int64_t distance = 0;
};

absl::StatusOr<PtrResult> Ptr(const QuerySpec& spec, const RealDataset& data,
                              double eps, LogProbability delta, double beta,
                              RngStream& rng, const PtrOptions& options = {});

struct PurePtrResult {
  std::vector<double> value;
  // Input to purification: the PTR release or the uniform replacement.
  std::vector<double> value_apx;
  bool bottom = false;
  bool mixed = false;
};

// (2 eps + eps')-pure DP. The bottom output is replaced by a uniform draw from
// the domain before purification.
absl::StatusOr<PurePtrResult> PurePtr(const QuerySpec& spec,
                                      const RealDataset& data, double eps,
                                      double eps_prime, LogProbability delta,
                                      double beta, double omega,
                                      RngStream& rng,
                                      const PtrOptions& options = {});

struct LocalSensitivityDefaults {
  double omega = 0.0;
  LogProbability delta = LogProbability::FromValue(1.0);
};

// omega = min(1/100, 1/(R eps^2)), delta = 2 omega / (16 d R eps)^d with R
// the l2 diameter of the domain.
absl::StatusOr<LocalSensitivityDefaults> MakeLocalSensitivityDefaults(
    int d, double diameter, double eps);

struct LocalSensitivityResult {
  std::vector<double> q_pure;
  std::vector<double> q_apx;
  double beta_hat = 0.0;
  // beta_hat came out nonpositive and was reset to log(2/delta)/eps.
  bool beta_clamped = false;
  bool mixed = false;
};

// 3 eps-pure DP release with noise scaled to a private upper bound on the
// local sensitivity.
absl::StatusOr<LocalSensitivityResult> PrivateLocalSensitivityRelease(
    const QuerySpec& spec, const RealDataset& data, double eps,
    LogProbability delta, double omega, RngStream& rng);

// log(1/delta) = d log(2 d^3 / eps).
double ModeLogInverseDelta(int d, double eps);

// Count gap 8 log2|X| log2(log2|X| / eps) / eps used as the stability
// requirement in tests and experiments.
double ModeGapRequirement(std::uint64_t universe_size, double eps);

struct ModeOptions {
  // Lower delta to just below the discrete purification threshold when it is
  // not already below it.
  bool enforce_discrete_threshold = false;
  double noise_multiplier = 1.0;
};

struct ModeResult {
  std::uint64_t item = 0;
  std::uint64_t mode = 0;
  std::int64_t occ1 = 0;
  std::int64_t occ2 = 0;
  std::int64_t gap = 0;
  bool bottom = false;
  bool mixed = false;
  bool threshold_violated = false;
};

absl::StatusOr<ModeResult> ModeRelease(const std::vector<std::uint64_t>& data,
                                       std::uint64_t universe_size, double eps,
                                       RngStream& rng,
                                       const ModeOptions& options = {});

struct RegressionInstance {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  double x_bound = 1.0;
  double y_bound = 1.0;
};

// Rows uniform on the sphere of radius x_bound, y = X theta_star.
RegressionInstance MakeRegressionInstance(std::int64_t n,
                                          const Eigen::VectorXd& theta_star,
                                          double x_bound, RngStream& rng);

double RegressionMse(const RegressionInstance& instance,
                     const Eigen::VectorXd& theta);

// max{0, sqrt(d log(6/delta) log(2 d^2/zeta)) ||X||^2 / (eps/3) - lambda_min}.
double AdasspRidge(int d, double eps, LogProbability delta, double zeta,
                   double x_bound, double lambda_min_hat);

// (||Y||/||X||) (2 / sqrt(d L6 Lz)) (n eps / 3 + sqrt(L6) (sqrt(d) +
// sqrt(2 log(1/zeta)))) with L6 = log(6/delta), Lz = log(2 d^2 / zeta).
double AdasspTrustRadius(std::int64_t n, int d, double eps,
                         LogProbability delta, double zeta, double x_bound,
                         double y_bound);

struct AdasspOptions {
  double zeta = 0.05;
  double noise_multiplier = 1.0;
  std::optional<double> ridge_override;
};

struct AdasspResult {
  Eigen::VectorXd theta;
  double lambda = 0.0;
  double lambda_min_hat = 0.0;
};

// (eps, delta)-DP with eps and delta split evenly over the eigenvalue bound,
// X^T X and X^T y.
absl::StatusOr<AdasspResult> Adassp(const RegressionInstance& instance,
                                    double eps, LogProbability delta,
                                    RngStream& rng,
                                    const AdasspOptions& options = {});

// delta = 2 omega / (16 d^(3/2) R n^2)^d with R the trust radius at that delta,
// found by fixed-point iteration.
LogProbability DefaultAdasspDelta(std::int64_t n, int d, double eps,
                                  double omega, double zeta, double x_bound,
                                  double y_bound);

struct PureAdasspResult {
  Eigen::VectorXd theta_pure;
  Eigen::VectorXd theta_apx;
  double trust_radius = 0.0;
  double lambda = 0.0;
  bool clipped = false;
  bool mixed = false;
  PurifyParams purify_params;
};

// (eps + eps')-pure DP.
absl::StatusOr<PureAdasspResult> PureAdassp(const RegressionInstance& instance,
                                            double eps, double eps_prime,
                                            LogProbability delta, double omega,
                                            RngStream& rng,
                                            const AdasspOptions& options = {});

}  // namespace purify

#endif  // PURIFY_ADAPTIVE_H_

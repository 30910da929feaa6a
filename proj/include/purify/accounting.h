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

#ifndef PURIFY_ACCOUNTING_H_
#define PURIFY_ACCOUNTING_H_

#include <cstdint>
#include <optional>

#include "absl/status/statusor.h"
#include "purify/log_probability.h"

namespace purify {

// epsilon of the (epsilon, delta)-DP guarantee implied by rho-zCDP.
absl::StatusOr<double> ZcdpToDp(double rho, double delta);
absl::StatusOr<double> ZcdpToDp(double rho, LogProbability delta);

struct SubsampledGaussianAccount {
  double rho = 0.0;
  // Largest Renyi order for which the subsampling bound holds.
  double alpha_max = 0.0;
  // Set when a target delta was supplied; true iff the order used by the
  // zCDP-to-DP conversion falls inside [1, alpha_max].
  std::optional<bool> valid;
};

// rho = 13 gamma^2 rho0 T for T compositions of a Poisson-style subsampled
// Gaussian with per-step rho0. gamma must lie in (0, 1).
absl::StatusOr<SubsampledGaussianAccount> SubsampledGaussianZcdp(
    double rho0, double gamma, std::int64_t T,
    std::optional<double> delta_target = std::nullopt);

enum class Convexity { kConvex, kStronglyConvex };

struct SgdHyperParams {
  double gamma = 1.0;
  std::int64_t batch_size = 1;
  double sigma2 = 0.0;
  std::int64_t T = 1;
  // Constant step size; unused under strong convexity, where the schedule is
  // eta_t = 2 / (n lambda (t + 1)).
  double eta = 0.0;
  Convexity convexity = Convexity::kConvex;
  double lambda = 0.0;
  double rho = 0.0;
  // epsilon <= min(d, 8) ln(1/delta).
  bool valid = true;

  double StepSize(std::int64_t t, std::int64_t n) const;
};

// C is the l2 diameter of the domain; it enters only the convex step size.
absl::StatusOr<SgdHyperParams> ComputeSgdHyperParams(
    std::int64_t n, int d, double eps, LogProbability delta, double L,
    double C, Convexity convexity = Convexity::kConvex, double lambda = 0.0);
absl::StatusOr<SgdHyperParams> ComputeSgdHyperParams(
    std::int64_t n, int d, double eps, double delta, double L, double C,
    Convexity convexity = Convexity::kConvex, double lambda = 0.0);

struct LaplaceGdParams {
  std::int64_t T = 1;
  double noise_scale = 0.0;
  double eta = 0.0;
  double delta1 = 0.0;
  // T evaluated below 1 and was raised to 1.
  bool clamped = false;
};

// delta1 <= 0 selects the default sqrt(d) L.
absl::StatusOr<LaplaceGdParams> ComputeLaplaceGdParams(std::int64_t n, int d,
                                                       double eps, double L,
                                                       double C,
                                                       double delta1 = 0.0);

struct PurifySgdParams {
  double omega = 0.0;
  LogProbability delta = LogProbability::FromValue(1.0);
};

// omega = 1/n^2 and delta = 2 omega / (16 C d n^2)^d.
absl::StatusOr<PurifySgdParams> PurifyHyperParamsSgd(std::int64_t n, int d,
                                                     double C);

// eps^d / (2d)^(3d).
absl::StatusOr<LogProbability> DiscreteDeltaThreshold(std::int64_t d,
                                                      double eps);

}  // namespace purify

#endif  // PURIFY_ACCOUNTING_H_

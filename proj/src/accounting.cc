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

#include "purify/accounting.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace purify {

absl::StatusOr<double> ZcdpToDp(double rho, LogProbability delta) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    return absl::InvalidArgumentError(absl::StrCat("rho must be positive, got ",
                                                   rho));
  }
  if (!(delta.log() < 0.0) || !std::isfinite(delta.log())) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  return rho + 2.0 * std::sqrt(rho * -delta.log());
}

absl::StatusOr<double> ZcdpToDp(double rho, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return ZcdpToDp(rho, LogProbability::FromValue(delta));
}

absl::StatusOr<SubsampledGaussianAccount> SubsampledGaussianZcdp(
    double rho0, double gamma, std::int64_t T,
    std::optional<double> delta_target) {
  if (!(rho0 > 0.0)) {
    return absl::InvalidArgumentError("rho0 must be positive");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sampling rate must lie in (0, 1) for a nonempty order range, got ",
        gamma));
  }
  if (T < 1) return absl::InvalidArgumentError("T must be at least 1");
  SubsampledGaussianAccount account;
  account.rho = 13.0 * gamma * gamma * rho0 * static_cast<double>(T);
  account.alpha_max = std::log(1.0 / gamma) / (4.0 * rho0);
  if (delta_target.has_value()) {
    if (!(*delta_target > 0.0 && *delta_target < 1.0)) {
      return absl::InvalidArgumentError("target delta must lie in (0, 1)");
    }
    const double alpha =
        1.0 + std::sqrt(std::log(1.0 / *delta_target) / account.rho);
    account.valid = alpha <= account.alpha_max;
  }
  return account;
}

double SgdHyperParams::StepSize(std::int64_t t, std::int64_t n) const {
  if (convexity == Convexity::kStronglyConvex) {
    return 2.0 / (static_cast<double>(n) * lambda * static_cast<double>(t + 1));
  }
  return eta;
}

absl::StatusOr<SgdHyperParams> ComputeSgdHyperParams(
    std::int64_t n, int d, double eps, LogProbability delta, double L,
    double C, Convexity convexity, double lambda) {
  if (n < 1 || d < 1) {
    return absl::InvalidArgumentError("n and d must be at least 1");
  }
  if (!(eps > 0.0) || !(L > 0.0) || !(C > 0.0)) {
    return absl::InvalidArgumentError("eps, L and C must be positive");
  }
  if (!(delta.log() < 0.0) || !std::isfinite(delta.log())) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (convexity == Convexity::kStronglyConvex && !(lambda > 0.0)) {
    return absl::InvalidArgumentError(
        "strong convexity requires a positive lambda");
  }
  const double log_inv_delta = -delta.log();
  const double nd = static_cast<double>(n);
  SgdHyperParams p;
  p.convexity = convexity;
  p.lambda = lambda;
  p.valid = eps <= std::min(d, 8) * log_inv_delta;
  p.gamma = std::min(1.0, 2.0 * std::sqrt(d * log_inv_delta) /
                              (nd * std::sqrt(eps)));
  p.batch_size = std::max<std::int64_t>(1, std::llround(p.gamma * nd));
  p.sigma2 = 416.0 * L * L * log_inv_delta / eps;
  const double t_real = nd * nd * eps * eps / (d * log_inv_delta);
  p.T = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(t_real)));
  const double T = static_cast<double>(p.T);
  p.eta = std::sqrt(C * C / (T * (nd * nd * L * L + d * p.sigma2 /
                                                         (p.gamma * p.gamma) +
                                  nd * L * L / p.gamma)));
  // Per-step zCDP of the Gaussian on the clipped gradient sum (sensitivity L).
  const double rho0 = L * L / (2.0 * p.sigma2);
  p.rho = 13.0 * p.gamma * p.gamma * rho0 * T;
  return p;
}

absl::StatusOr<SgdHyperParams> ComputeSgdHyperParams(
    std::int64_t n, int d, double eps, double delta, double L, double C,
    Convexity convexity, double lambda) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  return ComputeSgdHyperParams(n, d, eps, LogProbability::FromValue(delta), L,
                               C, convexity, lambda);
}

absl::StatusOr<LaplaceGdParams> ComputeLaplaceGdParams(std::int64_t n, int d,
                                                       double eps, double L,
                                                       double C,
                                                       double delta1) {
  if (n < 1 || d < 1) {
    return absl::InvalidArgumentError("n and d must be at least 1");
  }
  if (!(eps > 0.0) || !(L > 0.0) || !(C > 0.0)) {
    return absl::InvalidArgumentError("eps, L and C must be positive");
  }
  LaplaceGdParams p;
  p.delta1 = delta1 > 0.0 ? delta1 : std::sqrt(static_cast<double>(d)) * L;
  const double nd = static_cast<double>(n);
  const double t_real = eps * nd * L / (p.delta1 * std::sqrt(d));
  if (t_real < 1.0) {
    p.T = 1;
    p.clamped = true;
  } else {
    p.T = static_cast<std::int64_t>(std::floor(t_real + 1e-9));
  }
  const double T = static_cast<double>(p.T);
  p.noise_scale = p.delta1 * T / eps;
  p.eta = C / std::sqrt(T * (nd * nd * L * L +
                             2.0 * d * p.noise_scale * p.noise_scale));
  return p;
}

absl::StatusOr<PurifySgdParams> PurifyHyperParamsSgd(std::int64_t n, int d,
                                                     double C) {
  if (n < 2 || d < 1 || !(C > 0.0)) {
    return absl::InvalidArgumentError("requires n >= 2, d >= 1 and C > 0");
  }
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  PurifySgdParams p;
  p.omega = 1.0 / n2;
  const double base = 16.0 * C * d * n2;
  const double log_delta = std::log(2.0) - std::log(n2) - d * std::log(base);
  const double denominator = n2 * std::pow(base, d);
  const double direct = 2.0 / denominator;
  if (std::isfinite(denominator) && direct > 0.0 && std::isnormal(direct)) {
    p.delta = LogProbability::FromLogAndValue(log_delta, direct);
  } else {
    p.delta = LogProbability::FromLog(log_delta);
  }
  return p;
}

absl::StatusOr<LogProbability> DiscreteDeltaThreshold(std::int64_t d,
                                                      double eps) {
  if (d < 1 || !(eps > 0.0)) {
    return absl::InvalidArgumentError("requires d >= 1 and eps > 0");
  }
  const double dd = static_cast<double>(d);
  const double log_value = dd * std::log(eps) - 3.0 * dd * std::log(2.0 * dd);
  const double numerator = std::pow(eps, dd);
  const double denominator = std::pow(2.0 * dd, 3.0 * dd);
  const double direct = numerator / denominator;
  if (std::isfinite(denominator) && std::isnormal(numerator) &&
      std::isnormal(direct)) {
    return LogProbability::FromLogAndValue(log_value, direct);
  }
  return LogProbability::FromLog(log_value);
}

}  // namespace purify

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

#include "purify/adaptive.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "absl/strings/str_cat.h"
#include "purify/accounting.h"
#include "purify/distributions.h"
#include "purify/linalg.h"

namespace purify {
namespace {

absl::Status CheckEpsDelta(double eps, LogProbability delta) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("eps must be positive, got ", eps));
  }
  if (!(delta.log() < 0.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  return absl::OkStatus();
}

std::vector<double> SortedClamped(const RealDataset& data, double lo,
                                  double hi) {
  std::vector<double> v;
  v.reserve(data.size());
  for (const auto& row : data) {
    v.push_back(row.empty() ? lo : std::clamp(row[0], lo, hi));
  }
  std::sort(v.begin(), v.end());
  return v;
}

// Order statistic with x_(i) = lo for i < 0 and hi for i >= n.
double OrderStat(const std::vector<double>& s, std::int64_t i, double lo,
                 double hi) {
  if (i < 0) return lo;
  if (i >= static_cast<std::int64_t>(s.size())) return hi;
  return s[i];
}

// Largest local sensitivity of the lower median over datasets within
// Hamming distance k.
double MedianReachableSensitivity(const std::vector<double>& s, std::int64_t k,
                                  double lo, double hi) {
  const std::int64_t m = (static_cast<std::int64_t>(s.size()) - 1) / 2;
  double best = 0.0;
  for (std::int64_t t = 0; t <= k + 1; ++t) {
    best = std::max(best, OrderStat(s, m + t, lo, hi) -
                              OrderStat(s, m + t - k - 1, lo, hi));
  }
  return best;
}

}  // namespace

absl::StatusOr<QuerySpec> MedianQuerySpec(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    return absl::InvalidArgumentError("requires finite lo < hi");
  }
  absl::StatusOr<LqBall> domain =
      LqBall::Create(Norm::kLinf, {0.5 * (lo + hi)}, 0.5 * (hi - lo));
  if (!domain.ok()) return domain.status();
  QuerySpec spec;
  spec.domain = *std::move(domain);
  spec.query = [lo, hi](const RealDataset& data) {
    const std::vector<double> s = SortedClamped(data, lo, hi);
    if (s.empty()) return std::vector<double>{lo};
    return std::vector<double>{s[(s.size() - 1) / 2]};
  };
  spec.local_sensitivity = [lo, hi](const RealDataset& data) {
    return MedianReachableSensitivity(SortedClamped(data, lo, hi), 0, lo, hi);
  };
  spec.distance_to_violation = [lo, hi](const RealDataset& data,
                                        double beta) -> std::int64_t {
    const std::vector<double> s = SortedClamped(data, lo, hi);
    const std::int64_t n = static_cast<std::int64_t>(s.size());
    for (std::int64_t k = 0; k <= n; ++k) {
      if (MedianReachableSensitivity(s, k, lo, hi) > beta) return k;
    }
    return kInfiniteDistance;
  };
  return spec;
}

absl::StatusOr<QuerySpec> SumQuerySpec(int d, std::int64_t n) {
  if (d < 1 || n < 1) return absl::InvalidArgumentError("requires d, n >= 1");
  absl::StatusOr<LqBall> domain =
      LqBall::Centered(Norm::kL2, d, static_cast<double>(n));
  if (!domain.ok()) return domain.status();
  absl::StatusOr<LqBall> unit = LqBall::Centered(Norm::kL2, d, 1.0);
  QuerySpec spec;
  spec.domain = *std::move(domain);
  spec.query = [d, unit = *unit](const RealDataset& data) {
    std::vector<double> sum(d, 0.0);
    for (const auto& row : data) {
      const std::vector<double> x = ClipToBall(row, unit);
      for (int i = 0; i < d; ++i) sum[i] += x[i];
    }
    return sum;
  };
  spec.local_sensitivity = [](const RealDataset& data) {
    double m = 0.0;
    for (const auto& row : data) m = std::max(m, NormOf(row, Norm::kL2));
    return 1.0 + std::min(m, 1.0);
  };
  spec.distance_to_violation = [ls = spec.local_sensitivity](
                                   const RealDataset& data,
                                   double beta) -> std::int64_t {
    if (ls(data) > beta) return 0;
    if (beta < 2.0) return 1;
    return kInfiniteDistance;
  };
  return spec;
}

double PtrThreshold(double eps, LogProbability delta) {
  return -delta.log() / eps;
}

absl::StatusOr<PtrResult> Ptr(const QuerySpec& spec, const RealDataset& data,
                              double eps, LogProbability delta, double beta,
                              RngStream& rng, const PtrOptions& options) {
  if (!spec.distance_to_violation || !spec.query) {
    return absl::InvalidArgumentError(
        "query spec lacks a query or distance function");
  }
  if (absl::Status s = CheckEpsDelta(eps, delta); !s.ok()) return s;
  if (!(beta > 0.0)) return absl::InvalidArgumentError("beta must be positive");
  PtrResult result;
  result.distance = spec.distance_to_violation(data, beta);
  const double noisy =
      (result.distance == kInfiniteDistance
           ? std::numeric_limits<double>::infinity()
           : static_cast<double>(result.distance)) +
      options.test_noise_multiplier * Laplace(rng, 1.0 / eps);
  if (noisy <= PtrThreshold(eps, delta)) return result;
  std::vector<double> value = spec.query(data);
  for (double& v : value) {
    v += options.release_noise_multiplier * Laplace(rng, beta / eps);
  }
  result.value = std::move(value);
  return result;
}

absl::StatusOr<PurePtrResult> PurePtr(const QuerySpec& spec,
                                      const RealDataset& data, double eps,
                                      double eps_prime, LogProbability delta,
                                      double beta, double omega,
                                      RngStream& rng,
                                      const PtrOptions& options) {
  if (!spec.domain.has_value()) {
    return absl::InvalidArgumentError("query spec lacks an output domain");
  }
  const LqBall& domain = *spec.domain;
  absl::StatusOr<PurifyParams> params =
      MakePurifyParams(domain, 2.0 * eps, eps_prime, delta, omega);
  if (!params.ok()) return params.status();
  RngStream ptr_rng = rng.Substream(0);
  absl::StatusOr<PtrResult> ptr =
      Ptr(spec, data, eps, delta, beta, ptr_rng, options);
  if (!ptr.ok()) return ptr.status();
  RngStream purify_rng = rng.Substream(1);
  PurePtrResult result;
  std::vector<double> theta;
  if (ptr->value.has_value()) {
    theta = *std::move(ptr->value);
  } else {
    result.bottom = true;
    theta = SampleUniformBall(domain, purify_rng);
  }
  absl::StatusOr<PurifyResult> pure =
      Purify(theta, domain, *params, purify_rng);
  if (!pure.ok()) return pure.status();
  result.value_apx = std::move(theta);
  result.value = std::move(pure->x);
  result.mixed = pure->mixed;
  return result;
}

absl::StatusOr<LocalSensitivityDefaults> MakeLocalSensitivityDefaults(
    int d, double diameter, double eps) {
  if (d < 1 || !(diameter > 0.0) || !(eps > 0.0)) {
    return absl::InvalidArgumentError(
        "requires d >= 1, positive diameter and eps");
  }
  LocalSensitivityDefaults out;
  out.omega = std::min(0.01, 1.0 / (diameter * eps * eps));
  out.delta = LogProbability::FromLog(
      std::log(2.0 * out.omega) -
      d * std::log(16.0 * d * diameter * eps));
  if (!(out.delta.log() < 0.0)) {
    out.delta = LogProbability::FromLog(std::log(2.0 * out.omega));
  }
  return out;
}

absl::StatusOr<LocalSensitivityResult> PrivateLocalSensitivityRelease(
    const QuerySpec& spec, const RealDataset& data, double eps,
    LogProbability delta, double omega, RngStream& rng) {
  if (!spec.query || !spec.local_sensitivity || !spec.domain.has_value()) {
    return absl::InvalidArgumentError(
        "query spec needs a query, local sensitivity and domain");
  }
  if (absl::Status s = CheckEpsDelta(eps, delta); !s.ok()) return s;
  const LqBall& domain = *spec.domain;
  absl::StatusOr<PurifyParams> params =
      MakePurifyParams(domain, 2.0 * eps, eps, delta, omega);
  if (!params.ok()) return params.status();

  RngStream mech_rng = rng.Substream(0);
  LocalSensitivityResult result;
  const double offset = (std::log(2.0) - delta.log()) / eps;
  result.beta_hat =
      spec.local_sensitivity(data) + Laplace(mech_rng, 1.0 / eps) + offset;
  if (!(result.beta_hat > 0.0)) {
    result.beta_hat = offset;
    result.beta_clamped = true;
  }
  std::vector<double> q = spec.query(data);
  if (static_cast<int>(q.size()) != domain.dim()) {
    return absl::InvalidArgumentError("query dimension does not match domain");
  }
  for (double& v : q) v += Laplace(mech_rng, result.beta_hat / eps);
  result.q_apx = ClipToBall(q, domain);

  RngStream purify_rng = rng.Substream(1);
  absl::StatusOr<PurifyResult> pure =
      Purify(result.q_apx, domain, *params, purify_rng);
  if (!pure.ok()) return pure.status();
  result.q_pure = std::move(pure->x);
  result.mixed = pure->mixed;
  return result;
}

double ModeLogInverseDelta(int d, double eps) {
  const double dd = static_cast<double>(d);
  return dd * std::log(2.0 * dd * dd * dd / eps);
}

double ModeGapRequirement(std::uint64_t universe_size, double eps) {
  const double bits = std::log2(static_cast<double>(universe_size));
  return 8.0 * bits * std::max(1.0, std::log2(bits / eps)) / eps;
}

absl::StatusOr<ModeResult> ModeRelease(const std::vector<std::uint64_t>& data,
                                       std::uint64_t universe_size, double eps,
                                       RngStream& rng,
                                       const ModeOptions& options) {
  if (data.empty()) return absl::FailedPreconditionError("empty dataset");
  if (universe_size < 2) {
    return absl::InvalidArgumentError("universe needs at least two items");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError("eps must be positive");
  }
  std::unordered_map<std::uint64_t, std::int64_t> counts;
  counts.reserve(data.size());
  for (std::uint64_t u : data) {
    if (u >= universe_size) {
      return absl::FailedPreconditionError(
          absl::StrCat("item ", u, " outside universe of size ",
                       universe_size));
    }
    ++counts[u];
  }
  ModeResult result;
  bool first = true;
  for (const auto& [item, c] : counts) {
    if (first || c > result.occ1 || (c == result.occ1 && item < result.mode)) {
      if (!first) result.occ2 = std::max(result.occ2, result.occ1);
      result.mode = item;
      result.occ1 = c;
      first = false;
    } else {
      result.occ2 = std::max(result.occ2, c);
    }
  }
  result.gap = (result.occ1 - result.occ2 + 1) / 2;

  const int d = BitWidth(universe_size);
  LogProbability delta = LogProbability::FromLog(-ModeLogInverseDelta(d, eps));
  if (options.enforce_discrete_threshold) {
    absl::StatusOr<LogProbability> threshold = DiscreteDeltaThreshold(d, eps);
    if (!threshold.ok()) return threshold.status();
    if (!(delta < *threshold)) {
      delta = LogProbability::FromLog(threshold->log() - 1e-9);
    }
  }

  RngStream mech_rng = rng.Substream(0);
  const double noisy = static_cast<double>(result.gap - 1) +
                       options.noise_multiplier * Laplace(mech_rng, 1.0 / eps);
  std::uint64_t u_apx = result.mode;
  if (noisy <= -delta.log() / eps) {
    result.bottom = true;
    u_apx = UniformIndex(mech_rng, universe_size);
  }
  RngStream purify_rng = rng.Substream(1);
  absl::StatusOr<DiscretePurifyResult> pure =
      PurifyDiscrete(u_apx, universe_size, eps, delta, purify_rng);
  if (!pure.ok()) return pure.status();
  result.item = pure->index;
  result.mixed = pure->mixed;
  result.threshold_violated = pure->threshold_violated;
  return result;
}

RegressionInstance MakeRegressionInstance(std::int64_t n,
                                          const Eigen::VectorXd& theta_star,
                                          double x_bound, RngStream& rng) {
  const int d = static_cast<int>(theta_star.size());
  RegressionInstance inst;
  inst.x.resize(n, d);
  for (std::int64_t i = 0; i < n; ++i) {
    Eigen::VectorXd row(d);
    for (int j = 0; j < d; ++j) row(j) = StandardGaussian(rng);
    inst.x.row(i) = x_bound * row.transpose() / row.norm();
  }
  inst.y = inst.x * theta_star;
  inst.x_bound = x_bound;
  inst.y_bound = x_bound * theta_star.norm();
  return inst;
}

double RegressionMse(const RegressionInstance& instance,
                     const Eigen::VectorXd& theta) {
  return (instance.y - instance.x * theta).squaredNorm() /
         (2.0 * static_cast<double>(instance.x.rows()));
}

double AdasspRidge(int d, double eps, LogProbability delta, double zeta,
                   double x_bound, double lambda_min_hat) {
  const double l6 = std::log(6.0) - delta.log();
  const double lz = std::log(2.0 * d * d / zeta);
  return std::max(0.0, std::sqrt(d * l6 * lz) * x_bound * x_bound /
                               (eps / 3.0) -
                           lambda_min_hat);
}

double AdasspTrustRadius(std::int64_t n, int d, double eps,
                         LogProbability delta, double zeta, double x_bound,
                         double y_bound) {
  const double l6 = std::log(6.0) - delta.log();
  const double lz = std::log(2.0 * d * d / zeta);
  return (y_bound / x_bound) * (2.0 / std::sqrt(d * l6 * lz)) *
         (static_cast<double>(n) * eps / 3.0 +
          std::sqrt(l6) * (std::sqrt(static_cast<double>(d)) +
                           std::sqrt(2.0 * std::log(1.0 / zeta))));
}

absl::StatusOr<AdasspResult> Adassp(const RegressionInstance& instance,
                                    double eps, LogProbability delta,
                                    RngStream& rng,
                                    const AdasspOptions& options) {
  if (absl::Status s = CheckEpsDelta(eps, delta); !s.ok()) return s;
  const Eigen::Index n = instance.x.rows();
  const int d = static_cast<int>(instance.x.cols());
  if (d < 1 || n <= d) {
    return absl::FailedPreconditionError("requires n > d >= 1");
  }
  if (instance.y.size() != n) {
    return absl::FailedPreconditionError("X and y have different lengths");
  }
  if (!(instance.x_bound > 0.0) || !(instance.y_bound > 0.0) ||
      !(options.zeta > 0.0 && options.zeta < 1.0)) {
    return absl::InvalidArgumentError(
        "bounds must be positive and zeta in (0, 1)");
  }
  const double slack = 1.0 + 1e-9;
  if (instance.x.rowwise().norm().maxCoeff() > instance.x_bound * slack ||
      instance.y.cwiseAbs().maxCoeff() > instance.y_bound * slack) {
    return absl::FailedPreconditionError("data exceed the declared bounds");
  }

  const double l6 = std::log(6.0) - delta.log();
  const double eps3 = eps / 3.0;
  const double xb = instance.x_bound;
  const double m = options.noise_multiplier;
  const Eigen::MatrixXd xtx = instance.x.transpose() * instance.x;
  const Eigen::VectorXd xty = instance.x.transpose() * instance.y;

  absl::StatusOr<double> lambda_min = MinEigenvalue(xtx);
  if (!lambda_min.ok()) return lambda_min.status();
  AdasspResult result;
  result.lambda_min_hat =
      std::max(0.0, *lambda_min +
                        m * std::sqrt(l6) / eps3 * xb * xb *
                            StandardGaussian(rng) -
                        l6 / eps3 * xb * xb);
  result.lambda = options.ridge_override.has_value()
                      ? *options.ridge_override
                      : AdasspRidge(d, eps, delta, options.zeta, xb,
                                    result.lambda_min_hat);

  const double s1 = m * std::sqrt(l6) / eps3 * xb * xb;
  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      e1(i, j) = e1(j, i) = s1 * StandardGaussian(rng);
    }
  }
  const double s2 = m * std::sqrt(l6) / eps3 * xb * instance.y_bound;
  Eigen::VectorXd e2(d);
  for (int i = 0; i < d; ++i) e2(i) = s2 * StandardGaussian(rng);

  const Eigen::MatrixXd system =
      xtx + e1 + result.lambda * Eigen::MatrixXd::Identity(d, d);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) {
    return absl::FailedPreconditionError("regularized system is singular");
  }
  result.theta = lu.solve(xty + e2);
  return result;
}

LogProbability DefaultAdasspDelta(std::int64_t n, int d, double eps,
                                  double omega, double zeta, double x_bound,
                                  double y_bound) {
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  double log_delta = std::log(2.0 * omega);
  for (int iter = 0; iter < 50; ++iter) {
    const double r = AdasspTrustRadius(n, d, eps,
                                       LogProbability::FromLog(log_delta),
                                       zeta, x_bound, y_bound);
    const double next = std::log(2.0 * omega) -
                        dd * std::log(16.0 * std::pow(dd, 1.5) * r * nn * nn);
    if (std::fabs(next - log_delta) < 1e-12 * std::fabs(next)) {
      log_delta = next;
      break;
    }
    log_delta = next;
  }
  return LogProbability::FromLog(std::min(log_delta, std::log(2.0 * omega)));
}

absl::StatusOr<PureAdasspResult> PureAdassp(const RegressionInstance& instance,
                                            double eps, double eps_prime,
                                            LogProbability delta, double omega,
                                            RngStream& rng,
                                            const AdasspOptions& options) {
  RngStream mech_rng = rng.Substream(0);
  absl::StatusOr<AdasspResult> apx =
      Adassp(instance, eps, delta, mech_rng, options);
  if (!apx.ok()) return apx.status();
  const int d = static_cast<int>(instance.x.cols());
  PureAdasspResult result;
  result.lambda = apx->lambda;
  result.trust_radius =
      AdasspTrustRadius(instance.x.rows(), d, eps, delta, options.zeta,
                        instance.x_bound, instance.y_bound);
  absl::StatusOr<LqBall> ball =
      LqBall::Centered(Norm::kL2, d, result.trust_radius);
  if (!ball.ok()) return ball.status();
  absl::StatusOr<PurifyParams> params =
      MakePurifyParams(*ball, eps, eps_prime, delta, omega);
  if (!params.ok()) return params.status();
  result.purify_params = *params;

  std::vector<double> theta(apx->theta.data(), apx->theta.data() + d);
  result.clipped = !ball->Contains(theta);
  theta = ClipToBall(theta, *ball);
  result.theta_apx = Eigen::Map<Eigen::VectorXd>(theta.data(), d);
  RngStream purify_rng = rng.Substream(1);
  absl::StatusOr<PurifyResult> pure = Purify(theta, *ball, *params, purify_rng);
  if (!pure.ok()) return pure.status();
  result.theta_pure = Eigen::Map<Eigen::VectorXd>(pure->x.data(), d);
  result.mixed = pure->mixed;
  return result;
}

}  // namespace purify

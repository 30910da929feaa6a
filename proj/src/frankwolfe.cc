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

#include "purify/frankwolfe.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "purify/distributions.h"
#include "purify/purify.h"

namespace purify {
namespace {

absl::Status CheckL1Domain(const ConvexProblem& problem) {
  const LqBall& dom = problem.domain();
  if (dom.q() != Norm::kL1) {
    return absl::InvalidArgumentError("Frank-Wolfe needs an l1-ball domain");
  }
  for (double c : dom.center()) {
    if (c != 0.0) {
      return absl::InvalidArgumentError("the l1 domain must be centered at 0");
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<DpFwResult> DpFrankWolfe(const ConvexProblem& problem,
                                        const Dataset& data, double eps,
                                        LogProbability delta, std::int64_t T,
                                        RngStream& rng,
                                        const DpFwOptions& options) {
  if (absl::Status s = CheckL1Domain(problem); !s.ok()) return s;
  if (data.empty()) return absl::FailedPreconditionError("empty dataset");
  if (!(eps > 0.0) || T < 1 || !(delta.log() < 0.0)) {
    return absl::InvalidArgumentError(
        "requires eps > 0, T >= 1 and delta in (0, 1)");
  }
  const int d = problem.dim();
  const double r = problem.domain().radius();
  const double n = static_cast<double>(data.size());
  DpFwResult result;
  result.noise_scale = problem.lipschitz_l1() * r *
                       std::sqrt(8.0 * static_cast<double>(T) * -delta.log()) /
                       (n * eps);
  const double scale = result.noise_scale * options.noise_multiplier;
  std::vector<double> theta(d, 0.0);
  for (std::int64_t t = 0; t < T; ++t) {
    const std::vector<double> g = problem.EmpiricalGradient(theta, data);
    int best = 0;
    double best_score = INFINITY;
    for (int v = 0; v < 2 * d; ++v) {
      const double sign = (v % 2 == 0) ? 1.0 : -1.0;
      double score = sign * r * g[v / 2];
      if (scale > 0.0) score += Laplace(rng, scale);
      if (score < best_score) {
        best_score = score;
        best = v;
      }
    }
    const double eta = 2.0 / (static_cast<double>(t) + 2.0);
    for (double& x : theta) x *= (1.0 - eta);
    theta[best / 2] += eta * ((best % 2 == 0) ? r : -r);
    result.step_sizes.push_back(eta);
    result.vertices.push_back(best);
  }
  result.theta = std::move(theta);
  return result;
}

std::int64_t RipRows(int s, int d, double e, double zeta, double constant) {
  return static_cast<std::int64_t>(std::ceil(
      constant * (s * std::log(static_cast<double>(d) / s) +
                  std::log(1.0 / zeta)) /
      (e * e)));
}

RipMatrix GaussianMatrix(int k, int d, RngStream& rng) {
  RipMatrix m;
  m.phi.resize(k, d);
  const double sd = 1.0 / std::sqrt(static_cast<double>(k));
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < k; ++i) m.phi(i, j) = sd * StandardGaussian(rng);
  }
  m.rows_exceed_dim = k > d;
  return m;
}

absl::StatusOr<RipMatrix> GenerateRipMatrix(int s, int d, double e,
                                            double zeta, RngStream& rng,
                                            double constant) {
  if (s < 1 || s > d) {
    return absl::InvalidArgumentError("sparsity must lie in [1, d]");
  }
  if (!(e > 0.0 && e < 1.0) || !(zeta > 0.0 && zeta < 1.0) ||
      !(constant > 0.0)) {
    return absl::InvalidArgumentError(
        "requires e, zeta in (0, 1) and a positive constant");
  }
  const std::int64_t k = std::max<std::int64_t>(
      1, RipRows(s, d, e, zeta, constant));
  RipMatrix m = GaussianMatrix(static_cast<int>(k), d, rng);
  m.s = s;
  m.e = e;
  return m;
}

RipTarget RwcToRip(double e, int s) { return {e / 5.0, 25.0 * s / (e * e)}; }

absl::StatusOr<SparseRecoveryResult> SparseRecover(
    const Eigen::VectorXd& b, const Eigen::MatrixXd& phi, double xi,
    const SimplexOptions& options) {
  const int k = static_cast<int>(phi.rows());
  const int d = static_cast<int>(phi.cols());
  if (b.size() != k) {
    return absl::InvalidArgumentError("measurement size does not match phi");
  }
  if (!(xi >= 0.0)) return absl::InvalidArgumentError("xi must be >= 0");
  // Variables [u+, u-, v]; theta = u+ - u-, v bounds |phi theta - b|.
  LinearProgram lp;
  lp.A = Eigen::MatrixXd::Zero(2 * k + 1, 2 * d + k);
  lp.b = Eigen::VectorXd::Zero(2 * k + 1);
  lp.c = Eigen::VectorXd::Zero(2 * d + k);
  lp.c.head(2 * d).setOnes();
  lp.A.block(0, 0, k, d) = phi;
  lp.A.block(0, d, k, d) = -phi;
  lp.A.block(0, 2 * d, k, k) = -Eigen::MatrixXd::Identity(k, k);
  lp.b.head(k) = b;
  lp.A.block(k, 0, k, d) = -phi;
  lp.A.block(k, d, k, d) = phi;
  lp.A.block(k, 2 * d, k, k) = -Eigen::MatrixXd::Identity(k, k);
  lp.b.segment(k, k) = -b;
  lp.A.row(2 * k).tail(k).setOnes();
  lp.b(2 * k) = xi;
  auto sol = SolveLinearProgram(lp, options);
  if (!sol.ok()) return sol.status();
  const Eigen::VectorXd theta = sol->x.head(d) - sol->x.segment(d, d);
  SparseRecoveryResult result;
  result.theta.assign(theta.data(), theta.data() + d);
  result.residual_l1 = (phi * theta - b).lpNorm<1>();
  result.iterations = sol->iterations;
  const double slack = 1e-10 * (1.0 + b.lpNorm<1>());
  if (result.residual_l1 > xi * (1.0 + 1e-8) + slack) {
    return absl::AbortedError(absl::StrCat(
        "recovered point violates the residual constraint: ",
        result.residual_l1, " > ", xi));
  }
  return result;
}

double PurifiedFwResult::recovery_error() const {
  double e = 0.0;
  for (std::size_t i = 0; i < theta_fw.size(); ++i) {
    e += std::fabs(theta_recovered[i] - theta_fw[i]);
  }
  return e;
}

double PurifiedFwResult::RecoveryBound(double e) const {
  return 4.0 * std::sqrt(static_cast<double>(T)) * xi / std::sqrt(1.0 - e);
}

absl::StatusOr<PurifiedFwResult> PurifiedFrankWolfe(
    const ConvexProblem& problem, const Dataset& data, double eps,
    RngStream& rng, const PurifiedFwOptions& options) {
  if (absl::Status s = CheckL1Domain(problem); !s.ok()) return s;
  if (!problem.smoothness().has_value()) {
    return absl::InvalidArgumentError("purified Frank-Wolfe needs smoothness");
  }
  if (data.size() < 2) {
    return absl::FailedPreconditionError("need at least two examples");
  }
  if (!(eps > 0.0)) return absl::InvalidArgumentError("eps must be positive");
  const int d = problem.dim();
  const double r = problem.domain().radius();
  const double n = static_cast<double>(data.size());
  const double beta = *problem.smoothness();

  PurifiedFwResult result;
  result.T = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(
             options.t_constant *
             std::sqrt(beta * r * n * eps / problem.lipschitz_l1()))));
  const double T = static_cast<double>(result.T);
  result.k = std::max(
      1, static_cast<int>(std::ceil(
             options.k_constant *
             (T * std::log(std::max(d / T, 2.0)) + std::log(n)))));
  const double k = result.k;
  result.omega = 1.0 / n;
  // delta = 2 omega / (n k)^k.
  result.delta = LogProbability::FromLog(std::log(2.0 * result.omega) -
                                         k * std::log(n * k));

  RngStream fw_rng = rng.Substream(0);
  RngStream phi_rng = rng.Substream(1);
  RngStream purify_rng = rng.Substream(2);
  auto fw = DpFrankWolfe(problem, data, eps, result.delta, result.T, fw_rng);
  if (!fw.ok()) return fw.status();
  result.theta_fw = fw->theta;

  const RipMatrix phi = GaussianMatrix(result.k, d, phi_rng);
  const Eigen::Map<const Eigen::VectorXd> theta_fw(result.theta_fw.data(), d);
  const Eigen::VectorXd y = phi.phi * theta_fw;
  std::vector<double> projected(y.data(), y.data() + result.k);
  const LqBall ball = *LqBall::Centered(Norm::kL2, result.k, 2.0 * r);
  result.projection_clipped = !ball.Contains(projected);
  projected = ClipToBall(projected, ball);

  auto params = MakePurifyParams(ball, eps, eps, result.delta, result.omega);
  if (!params.ok()) return params.status();
  result.delta_w8 = params->delta_w8;
  auto pure = Purify(projected, ball, *params, purify_rng);
  if (!pure.ok()) return pure.status();
  result.mixed = pure->mixed;
  result.noise_l1 = NormOf(pure->noise, Norm::kL1);
  result.xi = 4.0 * result.delta_w8 / eps * (k + std::log(n));

  const Eigen::Map<const Eigen::VectorXd> b(pure->x.data(), result.k);
  auto recovered = SparseRecover(b, phi.phi, result.xi);
  if (recovered.ok()) {
    result.theta_recovered = recovered->theta;
  } else {
    result.recovery_failed = true;
    result.theta_recovered.assign(d, 0.0);
  }
  result.theta = ClipToBall(result.theta_recovered, problem.domain());
  return result;
}

}  // namespace purify

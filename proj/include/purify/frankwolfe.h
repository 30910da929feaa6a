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

#ifndef PURIFY_FRANKWOLFE_H_
#define PURIFY_FRANKWOLFE_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "purify/erm.h"
#include "purify/log_probability.h"
#include "purify/rng.h"
#include "purify/simplex.h"

namespace purify {

struct DpFwOptions {
  // Multiplies the Laplace score noise; 0 gives textbook Frank-Wolfe.
  double noise_multiplier = 1.0;
};

struct DpFwResult {
  std::vector<double> theta;
  std::vector<double> step_sizes;
  // Vertex chosen at each step: 2i is +r e_i, 2i+1 is -r e_i.
  std::vector<int> vertices;
  double noise_scale = 0.0;
};

// Frank-Wolfe over the l1 ball of radius r centered at 0, selecting vertices
// by Laplace-perturbed scores with scale L1 r sqrt(8 T ln(1/delta)) / (n eps).
// Ties go to the lowest vertex index.
absl::StatusOr<DpFwResult> DpFrankWolfe(const ConvexProblem& problem,
                                        const Dataset& data, double eps,
                                        LogProbability delta, std::int64_t T,
                                        RngStream& rng,
                                        const DpFwOptions& options = {});

// ceil(constant (s ln(d/s) + ln(1/zeta)) / e^2).
std::int64_t RipRows(int s, int d, double e, double zeta,
                     double constant = 8.0);

struct RipMatrix {
  Eigen::MatrixXd phi;
  int s = 0;
  double e = 0.0;
  // More rows than columns: the projection does not reduce dimension.
  bool rows_exceed_dim = false;

  int k() const { return static_cast<int>(phi.rows()); }
  int d() const { return static_cast<int>(phi.cols()); }
};

// k x d matrix of i.i.d. N(0, 1/k) entries with k = RipRows(s, d, e, zeta).
absl::StatusOr<RipMatrix> GenerateRipMatrix(int s, int d, double e,
                                            double zeta, RngStream& rng,
                                            double constant = 8.0);
// Gaussian k x d matrix with an explicit row count.
RipMatrix GaussianMatrix(int k, int d, RngStream& rng);

// An (e/5, 25 s / e^2)-RIP matrix is (e, s)-RWC.
struct RipTarget {
  double e = 0.0;
  double s = 0.0;
};
RipTarget RwcToRip(double e, int s);

struct SparseRecoveryResult {
  std::vector<double> theta;
  double residual_l1 = 0.0;
  int iterations = 0;
};

// argmin ||theta||_1 subject to ||phi theta - b||_1 <= xi, solved as a linear
// program in 2d + k variables. Infeasible programs give OutOfRange and solver
// failures give Aborted.
absl::StatusOr<SparseRecoveryResult> SparseRecover(
    const Eigen::VectorXd& b, const Eigen::MatrixXd& phi, double xi,
    const SimplexOptions& options = {});

struct PurifiedFwOptions {
  double t_constant = 1.0;
  double k_constant = 2.0;
  // Distortion used in the recovery error bound.
  double distortion = 0.25;
};

struct PurifiedFwResult {
  std::vector<double> theta;
  std::vector<double> theta_fw;
  // Sparse recovery output before the final l1 clip.
  std::vector<double> theta_recovered;
  std::int64_t T = 0;
  int k = 0;
  double xi = 0.0;
  double omega = 0.0;
  LogProbability delta = LogProbability::FromValue(1.0);
  double delta_w8 = 0.0;
  double noise_l1 = 0.0;
  bool mixed = false;
  // The projected point was clipped to radius 2r.
  bool projection_clipped = false;
  // The recovery program failed and the zero vector was used.
  bool recovery_failed = false;

  // Not mixed, not clipped, recovered, and noise within xi.
  bool success_path() const {
    return !mixed && !projection_clipped && !recovery_failed && noise_l1 <= xi;
  }
  double recovery_error() const;
  // 4 sqrt(T) xi / sqrt(1 - e).
  double RecoveryBound(double e) const;
};

// Frank-Wolfe at (eps, delta), projection by a Gaussian matrix, purification
// in k dimensions with eps' = eps, l1 recovery and a final clip to the l1
// ball. Requires an l1 domain centered at 0 and a smooth problem.
absl::StatusOr<PurifiedFwResult> PurifiedFrankWolfe(
    const ConvexProblem& problem, const Dataset& data, double eps,
    RngStream& rng, const PurifiedFwOptions& options = {});

}  // namespace purify

#endif  // PURIFY_FRANKWOLFE_H_

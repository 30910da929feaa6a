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

#ifndef PURIFY_SIMPLEX_H_
#define PURIFY_SIMPLEX_H_

#include <Eigen/Dense>

#include "absl/status/statusor.h"

namespace purify {

// minimize c'x subject to A x <= b, x >= 0.
struct LinearProgram {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

struct SimplexOptions {
  double tolerance = 1e-9;
  // 0 selects 50 * (rows + columns).
  int max_iterations = 0;
  // Consecutive degenerate pivots after which Bland's rule takes over.
  int degenerate_limit = 50;
};

struct LpSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
};

// Dense two-phase tableau simplex with Dantzig pricing and a Bland fallback.
// The final basis is re-solved with an LU factorization. Infeasible or
// unbounded programs give OutOfRange; hitting the iteration cap gives Aborted.
absl::StatusOr<LpSolution> SolveLinearProgram(
    const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace purify

#endif  // PURIFY_SIMPLEX_H_

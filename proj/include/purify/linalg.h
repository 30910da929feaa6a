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

#ifndef PURIFY_LINALG_H_
#define PURIFY_LINALG_H_

#include "Eigen/Dense"
#include "absl/status/statusor.h"

namespace purify {

struct JacobiOptions {
  // Stop once the off-diagonal Frobenius norm is below tolerance * ||A||_F.
  double tolerance = 1e-10;
  int max_sweeps = 100;
};

// Eigenvalues of a symmetric matrix in ascending order, by cyclic Jacobi
// rotations.
absl::StatusOr<Eigen::VectorXd> SymmetricEigenvalues(
    const Eigen::MatrixXd& a, const JacobiOptions& options = {});

absl::StatusOr<double> MinEigenvalue(const Eigen::MatrixXd& a,
                                     const JacobiOptions& options = {});

}  // namespace purify

#endif  // PURIFY_LINALG_H_

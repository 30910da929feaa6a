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

#include "purify/linalg.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace purify {
namespace {

double OffDiagonalNorm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

}  // namespace

absl::StatusOr<Eigen::VectorXd> SymmetricEigenvalues(
    const Eigen::MatrixXd& a, const JacobiOptions& options) {
  if (a.rows() != a.cols()) {
    return absl::InvalidArgumentError("matrix must be square");
  }
  if (!a.allFinite()) {
    return absl::FailedPreconditionError("matrix has non-finite entries");
  }
  const double scale = a.norm();
  if ((a - a.transpose()).norm() > 1e-12 * std::max(scale, 1.0)) {
    return absl::FailedPreconditionError("matrix is not symmetric");
  }
  Eigen::MatrixXd m = 0.5 * (a + a.transpose());
  const Eigen::Index n = m.rows();
  const double target = options.tolerance * scale;
  int sweep = 0;
  while (OffDiagonalNorm(m) > target) {
    if (++sweep > options.max_sweeps) {
      return absl::AbortedError(
          absl::StrCat("Jacobi did not converge in ", options.max_sweeps,
                       " sweeps"));
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = m(q, p) = 0.0;
      }
    }
  }
  Eigen::VectorXd eig = m.diagonal();
  std::sort(eig.data(), eig.data() + eig.size());
  return eig;
}

absl::StatusOr<double> MinEigenvalue(const Eigen::MatrixXd& a,
                                     const JacobiOptions& options) {
  if (a.rows() == 0) return absl::InvalidArgumentError("empty matrix");
  absl::StatusOr<Eigen::VectorXd> eig = SymmetricEigenvalues(a, options);
  if (!eig.ok()) return eig.status();
  return (*eig)(0);
}

}  // namespace purify

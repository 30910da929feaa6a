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

#include "purify/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace purify {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& options)
      : m_(static_cast<int>(lp.A.rows())),
        n_(static_cast<int>(lp.A.cols())),
        options_(options) {
    for (int i = 0; i < m_; ++i) {
      if (lp.b(i) < 0) artificial_rows_.push_back(i);
    }
    num_art_ = static_cast<int>(artificial_rows_.size());
    cols_ = n_ + m_ + num_art_;
    rhs_ = cols_;
    augmented_ = Eigen::MatrixXd::Zero(m_, cols_);
    rhs_signed_ = Eigen::VectorXd(m_);
    t_ = RowMatrix::Zero(m_ + 1, cols_ + 1);
    basis_.assign(m_, -1);
    int art = 0;
    for (int i = 0; i < m_; ++i) {
      const double sign = lp.b(i) < 0 ? -1.0 : 1.0;
      augmented_.row(i).head(n_) = sign * lp.A.row(i);
      augmented_(i, n_ + i) = sign;
      rhs_signed_(i) = sign * lp.b(i);
      if (sign < 0) {
        augmented_(i, n_ + m_ + art) = 1.0;
        basis_[i] = n_ + m_ + art;
        ++art;
      } else {
        basis_[i] = n_ + i;
      }
    }
    t_.topLeftCorner(m_, cols_) = augmented_;
    t_.col(rhs_).head(m_) = rhs_signed_;
    if (options_.max_iterations <= 0) {
      options_.max_iterations = 50 * (m_ + cols_);
    }
  }

  absl::Status Solve(const Eigen::VectorXd& c) {
    if (num_art_ > 0) {
      // Phase 1: minimize the sum of artificials.
      Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols_);
      phase1.tail(num_art_).setOnes();
      SetObjective(phase1);
      absl::Status s = Iterate(/*allow_artificial=*/true);
      if (!s.ok()) return s;
      const double infeasibility = -t_(m_, rhs_);
      const double scale = 1.0 + rhs_signed_.cwiseAbs().maxCoeff();
      if (infeasibility > 1e-7 * scale) {
        return absl::OutOfRangeError(absl::StrCat(
            "linear program is infeasible (phase-1 residual ", infeasibility,
            ")"));
      }
      DriveOutArtificials();
    }
    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols_);
    phase2.head(n_) = c;
    SetObjective(phase2);
    return Iterate(/*allow_artificial=*/false);
  }

  // Basic solution recomputed from the original columns.
  Eigen::VectorXd Solution() const {
    Eigen::MatrixXd B(m_, m_);
    for (int i = 0; i < m_; ++i) B.col(i) = augmented_.col(basis_[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Eigen::VectorXd xb = lu.solve(rhs_signed_);
    // Fall back to the tableau values if the basis is numerically singular.
    const double residual = (B * xb - rhs_signed_).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) ||
        residual > 1e-9 * (1.0 + rhs_signed_.cwiseAbs().maxCoeff())) {
      xb = t_.col(rhs_).head(m_);
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x(basis_[i]) = std::max(0.0, xb(i));
    }
    return x;
  }

  int iterations() const { return iterations_; }

 private:
  void SetObjective(const Eigen::VectorXd& cost) {
    cost_ = cost;
    t_.row(m_).setZero();
    t_.row(m_).head(cols_) = cost.transpose();
    for (int i = 0; i < m_; ++i) {
      const double cb = cost(basis_[i]);
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  void Pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) {
        t_.row(i) -= f * t_.row(row);
        t_(i, col) = 0.0;
      }
    }
    basis_[row] = col;
  }

  absl::Status Iterate(bool allow_artificial) {
    const double tol = options_.tolerance;
    const int limit = allow_artificial ? cols_ : n_ + m_;
    int degenerate_run = 0;
    while (true) {
      if (iterations_ >= options_.max_iterations) {
        return absl::AbortedError(absl::StrCat(
            "simplex did not converge in ", iterations_, " pivots"));
      }
      const bool bland = degenerate_run >= options_.degenerate_limit;
      int enter = -1;
      double best = -tol;
      for (int j = 0; j < limit; ++j) {
        const double rc = t_(m_, j);
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter < 0) return absl::OkStatus();
      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a > tol) {
          const double r = t_(i, rhs_) / a;
          if (leave < 0 || r < ratio - 1e-12) {
            ratio = r;
            leave = i;
          } else if (r <= ratio + 1e-12 && basis_[i] < basis_[leave]) {
            leave = i;
          }
        }
      }
      if (leave < 0) {
        return absl::OutOfRangeError("linear program is unbounded");
      }
      degenerate_run = ratio <= 1e-12 ? degenerate_run + 1 : 0;
      Pivot(leave, enter);
      ++iterations_;
    }
  }

  void DriveOutArtificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_ + m_) continue;
      int best = -1;
      double mag = options_.tolerance;
      for (int j = 0; j < n_ + m_; ++j) {
        if (std::fabs(t_(i, j)) > mag) {
          mag = std::fabs(t_(i, j));
          best = j;
        }
      }
      // A row with no candidate is redundant; its artificial stays at 0.
      if (best >= 0) Pivot(i, best);
    }
  }

  int m_, n_, num_art_ = 0, cols_ = 0, rhs_ = 0;
  SimplexOptions options_;
  std::vector<int> artificial_rows_;
  Eigen::MatrixXd augmented_;
  Eigen::VectorXd rhs_signed_;
  Eigen::VectorXd cost_;
  RowMatrix t_;
  std::vector<int> basis_;
  int iterations_ = 0;
};

}  // namespace

absl::StatusOr<LpSolution> SolveLinearProgram(const LinearProgram& lp,
                                              const SimplexOptions& options) {
  if (lp.A.rows() != lp.b.size() || lp.A.cols() != lp.c.size()) {
    return absl::InvalidArgumentError("linear program dimensions disagree");
  }
  if (!lp.A.allFinite() || !lp.b.allFinite() || !lp.c.allFinite()) {
    return absl::InvalidArgumentError("linear program has non-finite data");
  }
  Tableau tableau(lp, options);
  absl::Status s = tableau.Solve(lp.c);
  if (!s.ok()) return s;
  LpSolution solution;
  solution.x = tableau.Solution();
  solution.objective = lp.c.dot(solution.x);
  solution.iterations = tableau.iterations();
  return solution;
}

}  // namespace purify

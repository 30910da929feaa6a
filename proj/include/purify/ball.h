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

#ifndef PURIFY_BALL_H_
#define PURIFY_BALL_H_

#include <vector>

#include "absl/status/statusor.h"
#include "purify/log_probability.h"
#include "purify/rng.h"

namespace purify {

enum class Norm { kL1, kL2, kLinf };

double NormOf(const std::vector<double>& x, Norm q);
double Distance(const std::vector<double>& a, const std::vector<double>& b,
                Norm q);

// The set {x : ||x - center||_q <= radius}.
class LqBall {
 public:
  static absl::StatusOr<LqBall> Create(Norm q, std::vector<double> center,
                                       double radius);
  // Ball centered at the origin.
  static absl::StatusOr<LqBall> Centered(Norm q, int dim, double radius);

  Norm q() const { return q_; }
  const std::vector<double>& center() const { return center_; }
  double radius() const { return radius_; }
  double diameter() const { return 2.0 * radius_; }
  int dim() const { return static_cast<int>(center_.size()); }

  bool Contains(const std::vector<double>& x) const;

 private:
  LqBall(Norm q, std::vector<double> center, double radius)
      : q_(q), center_(std::move(center)), radius_(radius) {}

  Norm q_;
  std::vector<double> center_;
  double radius_;
};

std::vector<double> SampleUniformBall(const LqBall& ball, RngStream& rng);

// Radial scaling onto the boundary for q in {1, 2}, coordinatewise clamp for
// q = infinity. The identity inside the ball.
std::vector<double> ClipToBall(const std::vector<double>& x,
                               const LqBall& ball);

// Infinity-Wasserstein bound 2 d^(1-1/q) R (delta / 2 omega)^(1/d) where R is
// the diameter of the ball.
absl::StatusOr<double> CalibrateDeltaW8(const LqBall& ball,
                                        LogProbability delta, double omega);
absl::StatusOr<double> CalibrateDeltaW8(const LqBall& ball, double delta,
                                        double omega);

}  // namespace purify

#endif  // PURIFY_BALL_H_

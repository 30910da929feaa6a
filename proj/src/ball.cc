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

#include "purify/ball.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "purify/distributions.h"

namespace purify {

double NormOf(const std::vector<double>& x, Norm q) {
  double acc = 0.0;
  switch (q) {
    case Norm::kL1:
      for (double v : x) acc += std::fabs(v);
      return acc;
    case Norm::kL2:
      for (double v : x) acc += v * v;
      return std::sqrt(acc);
    case Norm::kLinf:
      for (double v : x) acc = std::max(acc, std::fabs(v));
      return acc;
  }
  return acc;
}

double Distance(const std::vector<double>& a, const std::vector<double>& b,
                Norm q) {
  std::vector<double> diff(a.size());
  for (size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return NormOf(diff, q);
}

absl::StatusOr<LqBall> LqBall::Create(Norm q, std::vector<double> center,
                                      double radius) {
  if (center.empty()) {
    return absl::InvalidArgumentError("ball dimension must be at least 1");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    return absl::InvalidArgumentError(
        absl::StrCat("ball radius must be positive and finite, got ", radius));
  }
  for (double c : center) {
    if (!std::isfinite(c)) {
      return absl::InvalidArgumentError("ball center must be finite");
    }
  }
  return LqBall(q, std::move(center), radius);
}

absl::StatusOr<LqBall> LqBall::Centered(Norm q, int dim, double radius) {
  if (dim < 1) {
    return absl::InvalidArgumentError("ball dimension must be at least 1");
  }
  return Create(q, std::vector<double>(dim, 0.0), radius);
}

bool LqBall::Contains(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  const double r = Distance(x, center_, q_);
  if (q_ == Norm::kL2) return r <= radius_ * (1.0 + 1e-12);
  return r <= radius_;
}

std::vector<double> SampleUniformBall(const LqBall& ball, RngStream& rng) {
  const int d = ball.dim();
  std::vector<double> x(d);
  switch (ball.q()) {
    case Norm::kLinf:
      for (int i = 0; i < d; ++i) {
        x[i] = ball.center()[i] + UniformReal(rng, -ball.radius(), ball.radius());
        x[i] = std::clamp(x[i], ball.center()[i] - ball.radius(),
                          ball.center()[i] + ball.radius());
      }
      return x;
    case Norm::kL1: {
      double total = 0.0;
      for (int i = 0; i < d; ++i) {
        x[i] = Exponential(rng);
        total += x[i];
      }
      const double r = ball.radius() * std::pow(Uniform01(rng), 1.0 / d);
      for (int i = 0; i < d; ++i) {
        const double sign = (rng() >> 63) ? -1.0 : 1.0;
        x[i] = sign * r * x[i] / total;
      }
      break;
    }
    case Norm::kL2: {
      double norm = 0.0;
      do {
        norm = 0.0;
        for (int i = 0; i < d; ++i) {
          x[i] = StandardGaussian(rng);
          norm += x[i] * x[i];
        }
      } while (norm == 0.0);
      norm = std::sqrt(norm);
      const double r = ball.radius() * std::pow(Uniform01(rng), 1.0 / d);
      for (int i = 0; i < d; ++i) x[i] = r * x[i] / norm;
      break;
    }
  }
  // Rounding can push a boundary point a few ulps outside.
  if (NormOf(x, ball.q()) > ball.radius()) {
    const double s = ball.radius() / NormOf(x, ball.q());
    for (double& v : x) v *= s;
  }
  for (int i = 0; i < d; ++i) x[i] += ball.center()[i];
  return ball.Contains(x) ? x : ClipToBall(x, ball);
}

std::vector<double> ClipToBall(const std::vector<double>& x,
                               const LqBall& ball) {
  if (ball.Contains(x)) return x;
  const int d = ball.dim();
  std::vector<double> out(d);
  if (ball.q() == Norm::kLinf) {
    for (int i = 0; i < d; ++i) {
      out[i] = std::clamp(x[i], ball.center()[i] - ball.radius(),
                          ball.center()[i] + ball.radius());
    }
    return out;
  }
  std::vector<double> diff(d);
  for (int i = 0; i < d; ++i) diff[i] = x[i] - ball.center()[i];
  double s = ball.radius() / NormOf(diff, ball.q());
  for (int attempt = 0; attempt < 4; ++attempt) {
    for (int i = 0; i < d; ++i) out[i] = ball.center()[i] + s * diff[i];
    if (ball.Contains(out)) break;
    s = std::nextafter(s, 0.0);
  }
  return out;
}

absl::StatusOr<double> CalibrateDeltaW8(const LqBall& ball,
                                        LogProbability delta, double omega) {
  if (!(omega > 0.0 && omega < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("omega must lie in (0, 1), got ", omega));
  }
  if (!std::isfinite(delta.log()) || delta.log() > 0.0) {
    return absl::InvalidArgumentError("delta must lie in (0, 1]");
  }
  const double d = ball.dim();
  double exponent = 0.0;
  switch (ball.q()) {
    case Norm::kL1:
      exponent = 0.0;
      break;
    case Norm::kL2:
      exponent = 0.5;
      break;
    case Norm::kLinf:
      exponent = 1.0;
      break;
  }
  const double log_ratio = (delta.log() - std::log(2.0 * omega)) / d;
  return 2.0 * std::pow(d, exponent) * ball.diameter() * std::exp(log_ratio);
}

absl::StatusOr<double> CalibrateDeltaW8(const LqBall& ball, double delta,
                                        double omega) {
  if (!(delta > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be positive, got ", delta));
  }
  return CalibrateDeltaW8(ball, LogProbability::FromValue(delta), omega);
}

}  // namespace purify

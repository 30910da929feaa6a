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

#include "purify/purify.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "purify/accounting.h"
#include "purify/distributions.h"

namespace purify {

absl::StatusOr<PurifyParams> MakePurifyParams(const LqBall& ball, double eps,
                                              double eps_prime,
                                              LogProbability delta,
                                              double omega) {
  if (!(eps_prime > 0.0) || !std::isfinite(eps_prime)) {
    return absl::InvalidArgumentError(
        absl::StrCat("eps' must be positive, got ", eps_prime));
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError("eps must be finite and nonnegative");
  }
  absl::StatusOr<double> w8 = CalibrateDeltaW8(ball, delta, omega);
  if (!w8.ok()) return w8.status();
  PurifyParams p;
  p.eps = eps;
  p.eps_prime = eps_prime;
  p.delta = delta;
  p.omega = omega;
  p.delta_w8 = *w8;
  return p;
}

absl::StatusOr<PurifyParams> MakePurifyParams(const LqBall& ball, double eps,
                                              double eps_prime, double delta,
                                              double omega) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return MakePurifyParams(ball, eps, eps_prime,
                          LogProbability::FromValue(delta), omega);
}

absl::StatusOr<PurifyResult> Purify(const std::vector<double>& x_apx,
                                    const LqBall& ball,
                                    const PurifyParams& params,
                                    RngStream& rng) {
  if (static_cast<int>(x_apx.size()) != ball.dim()) {
    return absl::InvalidArgumentError("input dimension does not match ball");
  }
  if (!(params.eps_prime > 0.0) || !(params.delta_w8 >= 0.0) ||
      !(params.omega > 0.0 && params.omega < 1.0)) {
    return absl::InvalidArgumentError("invalid purification parameters");
  }
  for (double v : x_apx) {
    if (!std::isfinite(v)) {
      return absl::FailedPreconditionError("input contains non-finite values");
    }
  }
  PurifyResult result;
  result.projected = !ball.Contains(x_apx);
  if (Uniform01(rng) < params.omega) {
    result.mixed = true;
    result.x = SampleUniformBall(ball, rng);
  } else {
    result.x = result.projected ? ClipToBall(x_apx, ball) : x_apx;
  }
  result.noise = LaplaceVector(rng, ball.dim(), params.noise_scale());
  for (int i = 0; i < ball.dim(); ++i) result.x[i] += result.noise[i];
  return result;
}

double PurifyL1ErrorBound(const LqBall& ball, const PurifyParams& params) {
  const double d = ball.dim();
  const double ratio =
      std::exp((params.delta.log() - std::log(2.0 * params.omega)) / d);
  // Converts the lq diameter to an l1 one; 1 for l1 balls.
  double factor = 1.0;
  if (ball.q() == Norm::kL2) factor = std::sqrt(d);
  if (ball.q() == Norm::kLinf) factor = d;
  return factor * (params.omega * ball.diameter() +
                   4.0 * ball.diameter() * d * ratio / params.eps_prime);
}

absl::StatusOr<std::vector<std::uint8_t>> BinEmbed(std::uint64_t u, int d) {
  if (d < 1 || d > 64) {
    return absl::InvalidArgumentError("bit width must lie in [1, 64]");
  }
  if (d < 64 && u >> d != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("index ", u, " does not fit in ", d, " bits"));
  }
  std::vector<std::uint8_t> bits(d);
  for (int i = 0; i < d; ++i) bits[i] = (u >> (d - 1 - i)) & 1u;
  return bits;
}

absl::StatusOr<std::uint64_t> BinDecode(const std::vector<std::uint8_t>& bits) {
  if (bits.empty() || bits.size() > 64) {
    return absl::InvalidArgumentError("bit width must lie in [1, 64]");
  }
  std::uint64_t u = 0;
  for (std::uint8_t b : bits) {
    if (b > 1) return absl::InvalidArgumentError("bits must be 0 or 1");
    u = (u << 1) | b;
  }
  return u;
}

int BitWidth(std::uint64_t space_size) {
  int d = 1;
  while (d < 64 && (std::uint64_t{1} << d) < space_size) ++d;
  return d;
}

absl::StatusOr<BitsPurifyResult> PurifyBits(
    const std::vector<std::uint8_t>& bits, double eps, LogProbability delta,
    RngStream& rng) {
  const int d = static_cast<int>(bits.size());
  if (d < 1) return absl::InvalidArgumentError("empty bit string");
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError("eps must be positive");
  }
  if (!std::isfinite(delta.log()) || delta.log() > 0.0) {
    return absl::InvalidArgumentError("delta must lie in (0, 1]");
  }
  absl::StatusOr<LogProbability> threshold = DiscreteDeltaThreshold(d, eps);
  if (!threshold.ok()) return threshold.status();

  // Cube [0,1]^d: an l-infinity ball of diameter 1, omega = 2^-d.
  const double dd = d;
  const double log_omega = -dd * std::log(2.0);
  const double log_w8 = std::log(2.0 * dd) +
                        (delta.log() - std::log(2.0) - log_omega) / dd;
  const double scale = 2.0 * std::exp(log_w8) / eps;

  BitsPurifyResult result;
  result.threshold_violated = !(delta < *threshold);
  result.mixed = std::log(Uniform01(rng)) < log_omega;
  std::vector<double> z(d);
  for (int i = 0; i < d; ++i) {
    z[i] = result.mixed ? Uniform01(rng) : static_cast<double>(bits[i]);
  }
  result.bits.resize(d);
  for (int i = 0; i < d; ++i) {
    result.bits[i] = z[i] + Laplace(rng, scale) >= 0.5 ? 1 : 0;
  }
  return result;
}

absl::StatusOr<DiscretePurifyResult> PurifyDiscrete(std::uint64_t u_apx,
                                                    std::uint64_t space_size,
                                                    double eps,
                                                    LogProbability delta,
                                                    RngStream& rng) {
  if (space_size < 2) {
    return absl::InvalidArgumentError("space size must be at least 2");
  }
  if (u_apx >= space_size) {
    return absl::InvalidArgumentError(
        absl::StrCat("index ", u_apx, " outside space of size ", space_size));
  }
  const int d = BitWidth(space_size);
  absl::StatusOr<std::vector<std::uint8_t>> bits = BinEmbed(u_apx, d);
  if (!bits.ok()) return bits.status();
  absl::StatusOr<BitsPurifyResult> purified = PurifyBits(*bits, eps, delta, rng);
  if (!purified.ok()) return purified.status();
  absl::StatusOr<std::uint64_t> decoded = BinDecode(purified->bits);
  if (!decoded.ok()) return decoded.status();
  DiscretePurifyResult result;
  result.mixed = purified->mixed;
  result.threshold_violated = purified->threshold_violated;
  if (*decoded >= space_size) {
    result.remapped = true;
    result.index = 0;
  } else {
    result.index = *decoded;
  }
  return result;
}

absl::StatusOr<DiscretePurifyResult> PurifyDiscrete(std::uint64_t u_apx,
                                                    std::uint64_t space_size,
                                                    double eps, double delta,
                                                    RngStream& rng) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return PurifyDiscrete(u_apx, space_size, eps,
                        LogProbability::FromValue(delta), rng);
}

absl::StatusOr<double> FolkloreMixEpsilon(std::uint64_t space_size, double eps,
                                          double delta, double omega) {
  if (space_size < 1) return absl::InvalidArgumentError("empty space");
  if (!(omega > 0.0 && omega <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("omega must lie in (0, 1], got ", omega));
  }
  if (!(eps >= 0.0) || !(delta >= 0.0 && delta <= 1.0)) {
    return absl::InvalidArgumentError("requires eps >= 0, delta in [0, 1]");
  }
  return eps + std::log1p(delta * static_cast<double>(space_size) *
                          std::exp(-eps) / omega);
}

std::uint64_t FolkloreMix(std::uint64_t u, std::uint64_t space_size,
                          double omega, RngStream& rng) {
  const bool mix = omega >= 1.0 || Uniform01(rng) < omega;
  return mix ? UniformIndex(rng, space_size) : u;
}

}  // namespace purify

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

#ifndef PURIFY_PURIFY_H_
#define PURIFY_PURIFY_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "purify/ball.h"
#include "purify/log_probability.h"
#include "purify/rng.h"

namespace purify {

struct PurifyParams {
  // Budget of the upstream mechanism; metadata only.
  double eps = 0.0;
  double eps_prime = 0.0;
  LogProbability delta = LogProbability::FromValue(1.0);
  double omega = 0.0;
  double delta_w8 = 0.0;

  // Per-coordinate Laplace scale 2 delta_w8 / eps_prime.
  double noise_scale() const { return 2.0 * delta_w8 / eps_prime; }
};

absl::StatusOr<PurifyParams> MakePurifyParams(const LqBall& ball, double eps,
                                              double eps_prime,
                                              LogProbability delta,
                                              double omega);
absl::StatusOr<PurifyParams> MakePurifyParams(const LqBall& ball, double eps,
                                              double eps_prime, double delta,
                                              double omega);

struct PurifyResult {
  std::vector<double> x;
  std::vector<double> noise;
  // The input was replaced by a uniform sample from the ball.
  bool mixed = false;
  // The input lay outside the ball and was projected first.
  bool projected = false;
};

// Draw order: one uniform for the mixing decision, a ball sample when mixing,
// then d Laplace draws.
absl::StatusOr<PurifyResult> Purify(const std::vector<double>& x_apx,
                                    const LqBall& ball,
                                    const PurifyParams& params,
                                    RngStream& rng);

// Upper bound on E||x_pure - x_apx||_1:
//   d^(1-1/q) (omega R + 4 R d (delta / 2 omega)^(1/d) / eps')
// with R the diameter.
double PurifyL1ErrorBound(const LqBall& ball, const PurifyParams& params);

// Big-endian binary embedding.
absl::StatusOr<std::vector<std::uint8_t>> BinEmbed(std::uint64_t u, int d);
absl::StatusOr<std::uint64_t> BinDecode(const std::vector<std::uint8_t>& bits);

// Bits needed to index a space of the given size, at least 1.
int BitWidth(std::uint64_t space_size);

struct BitsPurifyResult {
  std::vector<std::uint8_t> bits;
  bool mixed = false;
  bool threshold_violated = false;
};

// Purification of a bit string on the cube [0,1]^d with omega = 2^-d and
// eps' = eps, then rounding by 1(x_i >= 0.5).
absl::StatusOr<BitsPurifyResult> PurifyBits(
    const std::vector<std::uint8_t>& bits, double eps, LogProbability delta,
    RngStream& rng);

struct DiscretePurifyResult {
  std::uint64_t index = 0;
  bool mixed = false;
  bool threshold_violated = false;
  // Decoded index fell outside the space and was mapped to 0.
  bool remapped = false;
};

absl::StatusOr<DiscretePurifyResult> PurifyDiscrete(std::uint64_t u_apx,
                                                    std::uint64_t space_size,
                                                    double eps,
                                                    LogProbability delta,
                                                    RngStream& rng);
absl::StatusOr<DiscretePurifyResult> PurifyDiscrete(std::uint64_t u_apx,
                                                    std::uint64_t space_size,
                                                    double eps, double delta,
                                                    RngStream& rng);

// eps + ln(1 + delta |Y| e^-eps / omega).
absl::StatusOr<double> FolkloreMixEpsilon(std::uint64_t space_size, double eps,
                                          double delta, double omega);

// With probability omega, a uniform element of the space; else u.
std::uint64_t FolkloreMix(std::uint64_t u, std::uint64_t space_size,
                          double omega, RngStream& rng);

}  // namespace purify

#endif  // PURIFY_PURIFY_H_

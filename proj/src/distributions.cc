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

#include "purify/distributions.h"

#include <cmath>
#include <numbers>

namespace purify {

double Uniform01(RngStream& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double UniformReal(RngStream& rng, double lo, double hi) {
  return lo + (hi - lo) * Uniform01(rng);
}

std::uint64_t UniformIndex(RngStream& rng, std::uint64_t n) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
  std::uint64_t low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

bool Bernoulli(RngStream& rng, double p) { return Uniform01(rng) < p; }

double Laplace(RngStream& rng, double scale) {
  const double u = Uniform01(rng) - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::fabs(u));
  return u < 0 ? -magnitude : magnitude;
}

double StandardGaussian(RngStream& rng) {
  const double u1 = Uniform01(rng);
  const double u2 = Uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double Exponential(RngStream& rng, double rate) {
  return -std::log(Uniform01(rng)) / rate;
}

std::vector<double> LaplaceVector(RngStream& rng, int d, double scale) {
  std::vector<double> out(d);
  for (double& v : out) v = Laplace(rng, scale);
  return out;
}

std::vector<double> GaussianVector(RngStream& rng, int d, double stddev) {
  std::vector<double> out(d);
  for (double& v : out) v = stddev * StandardGaussian(rng);
  return out;
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double NormalQuantile(double p) {
  if (p <= 0.0) return -INFINITY;
  if (p >= 1.0) return INFINITY;
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::fabs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (NormalCdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace purify

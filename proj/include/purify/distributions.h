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

#ifndef PURIFY_DISTRIBUTIONS_H_
#define PURIFY_DISTRIBUTIONS_H_

#include <cstdint>
#include <vector>

#include "purify/rng.h"

namespace purify {

// Uniform on the open interval (0, 1) with 53 bits of resolution.
double Uniform01(RngStream& rng);

// Uniform on [lo, hi).
double UniformReal(RngStream& rng, double lo, double hi);

// Uniform integer in [0, n). Lemire's nearly-divisionless method.
std::uint64_t UniformIndex(RngStream& rng, std::uint64_t n);

bool Bernoulli(RngStream& rng, double p);

// Laplace with mean 0 and the given scale, by inverse CDF.
double Laplace(RngStream& rng, double scale);

// Standard normal via Box-Muller, consuming two words per draw.
double StandardGaussian(RngStream& rng);

double Exponential(RngStream& rng, double rate = 1.0);

std::vector<double> LaplaceVector(RngStream& rng, int d, double scale);
std::vector<double> GaussianVector(RngStream& rng, int d, double stddev);

// Standard normal CDF and its inverse.
double NormalCdf(double x);
double NormalQuantile(double p);

}  // namespace purify

#endif  // PURIFY_DISTRIBUTIONS_H_

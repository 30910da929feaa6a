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

#ifndef PURIFY_GAUSSIAN_H_
#define PURIFY_GAUSSIAN_H_

#include "absl/status/statusor.h"

namespace purify {

// Smallest delta for which the Gaussian mechanism with scale sigma and l2
// sensitivity `sensitivity` is (eps, delta)-DP.
double AnalyticGaussianDelta(double sigma, double eps, double sensitivity);

// Smallest sigma, to 1e-9 relative, whose analytic delta is at most `delta`.
absl::StatusOr<double> AnalyticGaussianSigma(double eps, double delta,
                                             double sensitivity);

}  // namespace purify

#endif  // PURIFY_GAUSSIAN_H_

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

#include "purify/gaussian.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "purify/distributions.h"

namespace purify {

double AnalyticGaussianDelta(double sigma, double eps, double sensitivity) {
  const double a = sensitivity / (2.0 * sigma);
  const double b = eps * sigma / sensitivity;
  const double first = NormalCdf(a - b);
  // e^eps Phi(-a - b) computed in log space; the product overflows naively.
  const double tail = 0.5 * std::erfc((a + b) / std::sqrt(2.0));
  const double second = tail > 0.0 ? std::exp(eps + std::log(tail)) : 0.0;
  return first - second;
}

absl::StatusOr<double> AnalyticGaussianSigma(double eps, double delta,
                                             double sensitivity) {
  if (!(eps > 0.0) || !(delta > 0.0 && delta < 1.0) || !(sensitivity > 0.0)) {
    return absl::InvalidArgumentError(
        "requires eps > 0, delta in (0, 1) and sensitivity > 0");
  }
  double lo = sensitivity * 1e-6;
  double hi = sensitivity;
  for (int i = 0; i < 200 && AnalyticGaussianDelta(lo, eps, sensitivity) <= delta;
       ++i) {
    lo /= 2.0;
  }
  for (int i = 0; i < 200 && AnalyticGaussianDelta(hi, eps, sensitivity) > delta;
       ++i) {
    hi *= 2.0;
  }
  if (AnalyticGaussianDelta(lo, eps, sensitivity) <= delta ||
      AnalyticGaussianDelta(hi, eps, sensitivity) > delta) {
    return absl::InternalError(absl::StrCat(
        "failed to bracket the Gaussian scale for eps=", eps,
        " delta=", delta));
  }
  while ((hi - lo) > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (AnalyticGaussianDelta(mid, eps, sensitivity) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace purify

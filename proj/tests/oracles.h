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

#ifndef PURIFY_TESTS_ORACLES_H_
#define PURIFY_TESTS_ORACLES_H_

// Independent reference computations used by the tests. Each one is written
// from the defining formula in long double and shares no code with the
// library.

#include <cmath>
#include <cstdint>
#include <vector>

namespace purify::oracle {

inline long double Phi(long double x) {
  return 0.5L * std::erfc(-x / std::sqrt(2.0L));
}

inline long double GaussianDelta(long double sigma, long double eps,
                                 long double sens) {
  const long double a = sens / (2 * sigma), b = eps * sigma / sens;
  return Phi(a - b) - std::exp(eps) * Phi(-a - b);
}

// ln of 2 d^(1-1/q) R (delta / 2 omega)^(1/d) with q encoded as 1, 2 or 0
// (infinity).
inline long double LogDeltaW8(int q, int d, long double diameter,
                              long double log_delta, long double omega) {
  const long double expo = q == 1 ? 0.0L : (q == 2 ? 0.5L : 1.0L);
  return std::log(2.0L) + expo * std::log((long double)d) +
         std::log(diameter) + (log_delta - std::log(2 * omega)) / d;
}

inline long double ZcdpToDp(long double rho, long double delta) {
  return rho + 2 * std::sqrt(rho * std::log(1 / delta));
}

// Exact Gamma(k, 1) upper tail for integer k: e^-x sum_{j<k} x^j / j!.
inline long double GammaUpperTail(int k, long double x) {
  long double term = 1, sum = 0;
  for (int j = 0; j < k; ++j) {
    sum += term;
    term *= x / (j + 1);
  }
  return std::exp(-x) * sum;
}

// Naive double loop for linear queries on a histogram.
inline std::vector<double> EvalQueriesNaive(
    const std::vector<std::vector<double>>& tables,
    const std::vector<std::int64_t>& counts) {
  std::vector<double> out;
  double n = 0;
  for (auto c : counts) n += c;
  for (const auto& t : tables) {
    long double s = 0;
    for (size_t x = 0; x < counts.size(); ++x) s += t[x] * counts[x];
    out.push_back(static_cast<double>(s / n));
  }
  return out;
}

}  // namespace purify::oracle

#endif  // PURIFY_TESTS_ORACLES_H_

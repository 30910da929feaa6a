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

#ifndef PURIFY_LOG_PROBABILITY_H_
#define PURIFY_LOG_PROBABILITY_H_

#include <cmath>
#include <limits>

namespace purify {

// A probability carried by its natural log so that values far below the
// smallest double (e.g. 1e-5000) stay usable. The direct value is kept
// alongside when it is representable, so that exact plug-in values such as
// 1/4096 round-trip without passing through exp(log(.)).
class LogProbability {
 public:
  static LogProbability FromValue(double p) {
    return LogProbability(std::log(p), p);
  }
  static LogProbability FromLog(double log_p) {
    const double v = std::exp(log_p);
    return LogProbability(log_p, v > 0.0 ? v : 0.0);
  }
  static LogProbability FromLogAndValue(double log_p, double p) {
    return LogProbability(log_p, p);
  }

  double log() const { return log_; }
  // Zero when the value underflows a double.
  double value() const { return value_; }
  bool representable() const { return value_ > 0.0 && std::isfinite(value_); }

  friend bool operator<(const LogProbability& a, const LogProbability& b) {
    return a.log_ < b.log_;
  }

 private:
  LogProbability(double log_p, double p) : log_(log_p), value_(p) {}

  double log_ = -std::numeric_limits<double>::infinity();
  double value_ = 0.0;
};

}  // namespace purify

#endif  // PURIFY_LOG_PROBABILITY_H_

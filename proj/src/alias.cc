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

#include "purify/alias.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "purify/distributions.h"

namespace purify {

absl::StatusOr<AliasTable> AliasTable::Create(
    const std::vector<double>& weights) {
  if (weights.empty()) {
    return absl::InvalidArgumentError("empty distribution");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      return absl::FailedPreconditionError(
          absl::StrCat("negative or non-finite mass ", weights[i], " at ", i));
    }
    total += weights[i];
  }
  if (!(total > 0.0)) {
    return absl::FailedPreconditionError("distribution has zero total mass");
  }
  const std::size_t n = weights.size();
  AliasTable table;
  table.prob_.assign(n, 1.0);
  table.alias_.resize(n);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    table.alias_[i] = i;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    table.prob_[s] = scaled[s];
    table.alias_[s] = l;
    ++table.touches_;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers hold mass 1 up to rounding.
  for (std::size_t i : large) {
    table.prob_[i] = 1.0;
    ++table.touches_;
  }
  for (std::size_t i : small) {
    table.prob_[i] = 1.0;
    ++table.touches_;
  }
  return table;
}

std::size_t AliasTable::Sample(RngStream& rng) const {
  const std::size_t i = UniformIndex(rng, prob_.size());
  return Uniform01(rng) < prob_[i] ? i : alias_[i];
}

std::vector<std::size_t> AliasTable::Sample(RngStream& rng,
                                            std::int64_t m) const {
  std::vector<std::size_t> out(static_cast<std::size_t>(m));
  for (auto& v : out) v = Sample(rng);
  return out;
}

std::vector<double> AliasTable::Probabilities() const {
  const std::size_t n = prob_.size();
  std::vector<double> p(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] += prob_[i];
    if (alias_[i] != i) p[alias_[i]] += 1.0 - prob_[i];
  }
  for (double& v : p) v /= static_cast<double>(n);
  return p;
}

}  // namespace purify

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

#ifndef PURIFY_ALIAS_H_
#define PURIFY_ALIAS_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "purify/rng.h"

namespace purify {

// Walker's alias table (Vose's construction): O(N) build, O(1) draws.
class AliasTable {
 public:
  // Weights need not be normalized but must be nonnegative with positive sum.
  static absl::StatusOr<AliasTable> Create(const std::vector<double>& weights);

  std::size_t Sample(RngStream& rng) const;
  std::vector<std::size_t> Sample(RngStream& rng, std::int64_t m) const;

  // Probability of outcome i implied by the table.
  std::vector<double> Probabilities() const;

  std::size_t size() const { return prob_.size(); }
  // Cells finalized during construction; equals size().
  std::int64_t preprocessing_touches() const { return touches_; }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
  std::int64_t touches_ = 0;
};

}  // namespace purify

#endif  // PURIFY_ALIAS_H_

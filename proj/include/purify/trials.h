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

#ifndef PURIFY_TRIALS_H_
#define PURIFY_TRIALS_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "purify/rng.h"

namespace purify {

enum class Execution { kSerial, kParallel };

// Trial i always draws from rng.Substream(i), so results do not depend on the
// execution mode or the thread count.

// Runs `trials` independent draws of `sample(RngStream&) -> size_t` and
// returns the histogram over [0, num_outcomes). Outcomes outside the range
// are counted in the extra last slot (index num_outcomes).
template <typename Sampler>
std::vector<std::int64_t> CountOutcomes(std::int64_t trials,
                                        std::size_t num_outcomes,
                                        const RngStream& rng,
                                        const Sampler& sample,
                                        Execution execution) {
  std::vector<std::int64_t> counts(num_outcomes + 1, 0);
  if (execution == Execution::kSerial) {
    for (std::int64_t i = 0; i < trials; ++i) {
      RngStream stream = rng.Substream(static_cast<std::uint64_t>(i));
      const std::size_t k = sample(stream);
      ++counts[k < num_outcomes ? k : num_outcomes];
    }
    return counts;
  }
#pragma omp parallel
  {
    std::vector<std::int64_t> local(num_outcomes + 1, 0);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < trials; ++i) {
      RngStream stream = rng.Substream(static_cast<std::uint64_t>(i));
      const std::size_t k = sample(stream);
      ++local[k < num_outcomes ? k : num_outcomes];
    }
#pragma omp critical(purify_count_outcomes)
    for (std::size_t k = 0; k <= num_outcomes; ++k) counts[k] += local[k];
  }
  return counts;
}

// Evaluates `fn(trial_index, RngStream&) -> T` for every trial and returns the
// results in trial order.
template <typename T, typename Fn>
std::vector<T> MapTrials(std::int64_t trials, const RngStream& rng,
                         const Fn& fn, Execution execution) {
  std::vector<T> out(static_cast<std::size_t>(trials));
  if (execution == Execution::kSerial) {
    for (std::int64_t i = 0; i < trials; ++i) {
      RngStream stream = rng.Substream(static_cast<std::uint64_t>(i));
      out[i] = fn(i, stream);
    }
    return out;
  }
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < trials; ++i) {
    RngStream stream = rng.Substream(static_cast<std::uint64_t>(i));
    out[i] = fn(i, stream);
  }
  return out;
}

}  // namespace purify

#endif  // PURIFY_TRIALS_H_

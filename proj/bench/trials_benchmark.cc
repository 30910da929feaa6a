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

// Serial vs OpenMP trial kernels. Arg 0 selects the execution mode.

#include <cstdint>
#include <vector>

#include "benchmark/benchmark.h"
#include "purify/accounting.h"
#include "purify/audit.h"
#include "purify/ball.h"
#include "purify/purify.h"
#include "purify/rng.h"
#include "purify/trials.h"

namespace purify {
namespace {

Execution Mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::kSerial : Execution::kParallel;
}

void BM_CountOutcomesPurifyDiscrete(benchmark::State& state) {
  const LogProbability delta = *DiscreteDeltaThreshold(8, 1.0);
  const auto sample = [&](RngStream& r) -> std::size_t {
    return PurifyDiscrete(77, 256, 1.0, delta, r)->index;
  };
  const RngStream rng(1, 0);
  for (auto _ : state) {
    auto counts = CountOutcomes(state.range(1), 256, rng, sample, Mode(state));
    benchmark::DoNotOptimize(counts.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_CountOutcomesPurifyDiscrete)
    ->ArgNames({"parallel", "trials"})
    ->Args({0, 100000})
    ->Args({1, 100000})
    ->UseRealTime();

void BM_MapTrialsPurify(benchmark::State& state) {
  const LqBall ball = *LqBall::Centered(Norm::kL2, 16, 1.0);
  const PurifyParams params = *MakePurifyParams(ball, 1.0, 1.0, 1e-12, 0.01);
  const RngStream rng(2, 0);
  for (auto _ : state) {
    auto out = MapTrials<double>(
        state.range(1), rng,
        [&](std::int64_t, RngStream& r) {
          const std::vector<double> x = SampleUniformBall(ball, r);
          return Distance(Purify(x, ball, params, r)->x, x, Norm::kL1);
        },
        Mode(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_MapTrialsPurify)
    ->ArgNames({"parallel", "trials"})
    ->Args({0, 20000})
    ->Args({1, 20000})
    ->UseRealTime();

void BM_EstimateMaxDivergence(benchmark::State& state) {
  const DiscreteSampler arm = [](RngStream& r) -> std::size_t {
    return FolkloreMix(3, 64, 0.1, r);
  };
  AuditOptions options;
  options.execution = Mode(state);
  const RngStream rng(3, 0);
  for (auto _ : state) {
    auto report = EstimateMaxDivergence(arm, arm, 64, state.range(1), rng, options);
    benchmark::DoNotOptimize(report->a_over_b.estimate);
  }
  state.SetItemsProcessed(state.iterations() * state.range(1) * 2);
}
BENCHMARK(BM_EstimateMaxDivergence)
    ->ArgNames({"parallel", "trials"})
    ->Args({0, 200000})
    ->Args({1, 200000})
    ->UseRealTime();

}  // namespace
}  // namespace purify

BENCHMARK_MAIN();

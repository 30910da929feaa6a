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

#ifndef PURIFY_AUDIT_H_
#define PURIFY_AUDIT_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "absl/status/statusor.h"
#include "purify/ball.h"
#include "purify/rng.h"
#include "purify/trials.h"

namespace purify {

struct TrialReport {
  double estimate = 0.0;
  std::int64_t trials = 0;
  // Half-width of a 95% confidence interval around the estimate.
  double conf_radius = 0.0;
  bool violated = false;
};

// Draws an outcome index; indices >= the declared outcome count are errors.
using DiscreteSampler = std::function<std::size_t(RngStream&)>;

struct AuditOptions {
  Execution execution = Execution::kParallel;
  int bootstrap_resamples = 200;
};

// Plug-in total variation between two samplers over [0, num_outcomes), with a
// centered percentile-bootstrap radius. Arm p uses rng.Substream(0), arm q
// uses rng.Substream(1).
absl::StatusOr<TrialReport> EstimateTvDiscrete(const DiscreteSampler& p,
                                               const DiscreteSampler& q,
                                               std::size_t num_outcomes,
                                               std::int64_t trials,
                                               const RngStream& rng,
                                               const AuditOptions& options = {});

// TV between two count vectors, 1/2 sum |a/na - b/nb|.
double TvFromCounts(const std::vector<std::int64_t>& a,
                    const std::vector<std::int64_t>& b);

struct MaxDivergenceReport {
  // max ln(p_a / p_b) and max ln(p_b / p_a) over outcomes above the floor.
  TrialReport a_over_b;
  TrialReport b_over_a;
  std::int64_t count_floor = 20;
  int outcomes_considered = 0;
  // Empirical mass of outcomes excluded by the floor, per arm.
  double excluded_mass_a = 0.0;
  double excluded_mass_b = 0.0;
  // Outcomes seen at least `count_floor` times in one arm and never in the
  // other.
  int one_sided_outcomes = 0;
  // One arm put all its mass on a single outcome and the other did not.
  bool degenerate = false;
  std::vector<std::int64_t> counts_a;
  std::vector<std::int64_t> counts_b;

  double Estimate() const {
    return a_over_b.estimate > b_over_a.estimate ? a_over_b.estimate
                                                 : b_over_a.estimate;
  }
  // Both directions lie within claimed_eps plus their confidence radius and
  // no outcome has one-sided support.
  bool ConsistentWith(double claimed_eps) const;
};

// Runs the mechanism on dataset A (`arm_a`) and dataset B (`arm_b`) `trials`
// times each. Confidence radii are Bonferroni-corrected delta-method bounds
// over all outcomes considered.
absl::StatusOr<MaxDivergenceReport> EstimateMaxDivergence(
    const DiscreteSampler& arm_a, const DiscreteSampler& arm_b,
    std::size_t num_outcomes, std::int64_t trials, const RngStream& rng,
    const AuditOptions& options = {}, std::int64_t count_floor = 20);

struct TightnessReport {
  TrialReport tv;
  // Largest displacement of the radial witness map over the nu samples.
  double w8_displacement = 0.0;
  // TV between the pushforward of nu under the witness map and mu, on the
  // same grid; near 0 when the coupling is valid.
  double witness_tv = 0.0;
  // Grid: an atom bin for the origin plus `radial_bins` equal-width bins of
  // the lq norm on [0, 1].
  int radial_bins = 0;
  double grid_step = 0.0;
};

// The pair mu = dt^d Dirac(0) + (1 - dt^d) Unif(annulus dt <= r <= 1) and
// nu = Unif(unit ball), whose TV is dt^d and whose W-infinity distance is dt.
absl::StatusOr<TightnessReport> TightnessCheck(int d, double delta_tilde,
                                               std::int64_t trials,
                                               const RngStream& rng,
                                               Norm q = Norm::kL2,
                                               int radial_bins = 100,
                                               const AuditOptions& options = {});

// 2 k b + 2 b ln(1/zeta).
double LaplaceL1TailBound(int k, double b, double zeta);

// Exceedance frequency of ||Lap(b)^k||_1 over the bound. Violated when the
// frequency is above zeta + 3 sqrt(zeta (1 - zeta) / trials).
absl::StatusOr<TrialReport> LaplaceL1TailCheck(int k, double b, double zeta,
                                               std::int64_t trials,
                                               const RngStream& rng,
                                               const AuditOptions& options = {});

}  // namespace purify

#endif  // PURIFY_AUDIT_H_

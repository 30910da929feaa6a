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

#include "purify/audit.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "purify/alias.h"
#include "purify/distributions.h"

namespace purify {
namespace {

absl::StatusOr<std::vector<std::int64_t>> SampleCounts(
    const DiscreteSampler& sampler, std::size_t num_outcomes,
    std::int64_t trials, const RngStream& rng, Execution execution) {
  std::vector<std::int64_t> counts =
      CountOutcomes(trials, num_outcomes, rng, sampler, execution);
  if (counts.back() != 0) {
    return absl::FailedPreconditionError(absl::StrCat(
        counts.back(), " draws fell outside the declared ", num_outcomes,
        " outcomes"));
  }
  counts.pop_back();
  return counts;
}

std::vector<std::int64_t> Resample(const AliasTable& table, std::int64_t n,
                                   RngStream& rng) {
  std::vector<std::int64_t> counts(table.size(), 0);
  for (std::int64_t i = 0; i < n; ++i) ++counts[table.Sample(rng)];
  return counts;
}

std::vector<double> AsWeights(const std::vector<std::int64_t>& counts) {
  return std::vector<double>(counts.begin(), counts.end());
}

// Centered percentile bootstrap: the 95th percentile of |T* - T_hat|.
double BootstrapTvRadius(const std::vector<std::int64_t>& a,
                         const std::vector<std::int64_t>& b, double tv_hat,
                         std::int64_t trials, const RngStream& rng,
                         int resamples, Execution execution) {
  if (resamples <= 0) return 0.0;
  const AliasTable ta = *AliasTable::Create(AsWeights(a));
  const AliasTable tb = *AliasTable::Create(AsWeights(b));
  const RngStream boot = rng.Substream(2);
  std::vector<double> dev = MapTrials<double>(
      resamples, boot,
      [&](std::int64_t, RngStream& s) {
        return std::fabs(TvFromCounts(Resample(ta, trials, s),
                                      Resample(tb, trials, s)) -
                         tv_hat);
      },
      execution);
  std::sort(dev.begin(), dev.end());
  const std::size_t idx = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(dev.size()))) - 1;
  return dev[std::min(idx, dev.size() - 1)];
}

}  // namespace

double TvFromCounts(const std::vector<std::int64_t>& a,
                    const std::vector<std::int64_t>& b) {
  double na = 0, nb = 0;
  for (auto c : a) na += static_cast<double>(c);
  for (auto c : b) nb += static_cast<double>(c);
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    tv += std::fabs(static_cast<double>(a[i]) / na -
                    static_cast<double>(b[i]) / nb);
  }
  return 0.5 * tv;
}

absl::StatusOr<TrialReport> EstimateTvDiscrete(const DiscreteSampler& p,
                                               const DiscreteSampler& q,
                                               std::size_t num_outcomes,
                                               std::int64_t trials,
                                               const RngStream& rng,
                                               const AuditOptions& options) {
  if (trials < 1 || num_outcomes < 1) {
    return absl::InvalidArgumentError("need at least one trial and outcome");
  }
  auto a = SampleCounts(p, num_outcomes, trials, rng.Substream(0),
                        options.execution);
  if (!a.ok()) return a.status();
  auto b = SampleCounts(q, num_outcomes, trials, rng.Substream(1),
                        options.execution);
  if (!b.ok()) return b.status();
  TrialReport report;
  report.trials = trials;
  report.estimate = TvFromCounts(*a, *b);
  report.conf_radius =
      BootstrapTvRadius(*a, *b, report.estimate, trials, rng,
                        options.bootstrap_resamples, options.execution);
  return report;
}

bool MaxDivergenceReport::ConsistentWith(double claimed_eps) const {
  return one_sided_outcomes == 0 &&
         a_over_b.estimate <= claimed_eps + a_over_b.conf_radius &&
         b_over_a.estimate <= claimed_eps + b_over_a.conf_radius;
}

absl::StatusOr<MaxDivergenceReport> EstimateMaxDivergence(
    const DiscreteSampler& arm_a, const DiscreteSampler& arm_b,
    std::size_t num_outcomes, std::int64_t trials, const RngStream& rng,
    const AuditOptions& options, std::int64_t count_floor) {
  if (trials < 1 || num_outcomes < 1) {
    return absl::InvalidArgumentError("need at least one trial and outcome");
  }
  auto a = SampleCounts(arm_a, num_outcomes, trials, rng.Substream(0),
                        options.execution);
  if (!a.ok()) return a.status();
  auto b = SampleCounts(arm_b, num_outcomes, trials, rng.Substream(1),
                        options.execution);
  if (!b.ok()) return b.status();

  MaxDivergenceReport report;
  report.count_floor = count_floor;
  report.counts_a = *a;
  report.counts_b = *b;
  const double n = static_cast<double>(trials);
  std::vector<std::size_t> kept;
  int support_a = 0, support_b = 0;
  for (std::size_t k = 0; k < num_outcomes; ++k) {
    const std::int64_t ca = (*a)[k], cb = (*b)[k];
    support_a += ca > 0;
    support_b += cb > 0;
    if ((ca >= count_floor && cb == 0) || (cb >= count_floor && ca == 0)) {
      ++report.one_sided_outcomes;
    }
    if (ca >= count_floor && cb >= count_floor) {
      kept.push_back(k);
    } else {
      report.excluded_mass_a += static_cast<double>(ca) / n;
      report.excluded_mass_b += static_cast<double>(cb) / n;
    }
  }
  report.degenerate = (support_a == 1) != (support_b == 1);
  report.outcomes_considered = static_cast<int>(kept.size());
  report.a_over_b.trials = report.b_over_a.trials = trials;
  if (kept.empty()) return report;

  const double z =
      NormalQuantile(1.0 - 0.05 / (2.0 * static_cast<double>(kept.size())));
  double best_ab = -INFINITY, best_ba = -INFINITY, radius = 0.0;
  for (std::size_t k : kept) {
    const double pa = static_cast<double>((*a)[k]) / n;
    const double pb = static_cast<double>((*b)[k]) / n;
    const double log_ratio = std::log(pa) - std::log(pb);
    best_ab = std::max(best_ab, log_ratio);
    best_ba = std::max(best_ba, -log_ratio);
    const double se = std::sqrt((1.0 - pa) / (n * pa) + (1.0 - pb) / (n * pb));
    radius = std::max(radius, z * se);
  }
  report.a_over_b.estimate = best_ab;
  report.b_over_a.estimate = best_ba;
  report.a_over_b.conf_radius = report.b_over_a.conf_radius = radius;
  return report;
}

absl::StatusOr<TightnessReport> TightnessCheck(int d, double delta_tilde,
                                               std::int64_t trials,
                                               const RngStream& rng, Norm q,
                                               int radial_bins,
                                               const AuditOptions& options) {
  if (d < 1 || d > 4) {
    return absl::InvalidArgumentError("tightness check supports 1 <= d <= 4");
  }
  if (!(delta_tilde > 0.0 && delta_tilde < 1.0)) {
    return absl::InvalidArgumentError("delta_tilde must lie in (0, 1)");
  }
  if (radial_bins < 1 || trials < 1) {
    return absl::InvalidArgumentError("need positive bins and trials");
  }
  const LqBall unit = *LqBall::Centered(q, d, 1.0);
  const double atom = std::pow(delta_tilde, d);
  const std::size_t outcomes = static_cast<std::size_t>(radial_bins) + 1;
  auto bin_of = [&](const std::vector<double>& x) -> std::size_t {
    const double r = NormOf(x, q);
    if (r == 0.0) return 0;
    const int b = std::min(radial_bins - 1,
                           static_cast<int>(std::floor(r * radial_bins)));
    return static_cast<std::size_t>(b) + 1;
  };
  auto sample_mu = [&](RngStream& s) -> std::vector<double> {
    if (Uniform01(s) < atom) return std::vector<double>(d, 0.0);
    // Radius with density proportional to r^(d-1) on [dt, 1].
    const double r = std::pow(atom + (1.0 - atom) * Uniform01(s), 1.0 / d);
    std::vector<double> x;
    double norm = 0.0;
    do {
      x = SampleUniformBall(unit, s);
      norm = NormOf(x, q);
    } while (norm == 0.0);
    for (double& v : x) v *= r / norm;
    return x;
  };
  auto witness = [&](const std::vector<double>& x) -> std::vector<double> {
    return NormOf(x, q) < delta_tilde ? std::vector<double>(d, 0.0) : x;
  };

  const DiscreteSampler mu = [&](RngStream& s) { return bin_of(sample_mu(s)); };
  const DiscreteSampler nu = [&](RngStream& s) {
    return bin_of(SampleUniformBall(unit, s));
  };
  auto tv = EstimateTvDiscrete(mu, nu, outcomes, trials, rng, options);
  if (!tv.ok()) return tv.status();

  TightnessReport report;
  report.tv = *tv;
  report.radial_bins = radial_bins;
  report.grid_step = 1.0 / radial_bins;

  // Push nu through the witness map, recording displacement.
  const RngStream wrng = rng.Substream(3);
  std::vector<std::pair<std::size_t, double>> pushed =
      MapTrials<std::pair<std::size_t, double>>(
          trials, wrng,
          [&](std::int64_t, RngStream& s) {
            const std::vector<double> x = SampleUniformBall(unit, s);
            const std::vector<double> y = witness(x);
            return std::make_pair(bin_of(y), Distance(x, y, q));
          },
          options.execution);
  std::vector<std::int64_t> pushed_counts(outcomes, 0);
  for (const auto& [bin, disp] : pushed) {
    ++pushed_counts[bin];
    report.w8_displacement = std::max(report.w8_displacement, disp);
  }
  auto mu_counts = SampleCounts(mu, outcomes, trials, rng.Substream(4),
                                options.execution);
  if (!mu_counts.ok()) return mu_counts.status();
  report.witness_tv = TvFromCounts(pushed_counts, *mu_counts);
  return report;
}

double LaplaceL1TailBound(int k, double b, double zeta) {
  return 2.0 * k * b + 2.0 * b * std::log(1.0 / zeta);
}

absl::StatusOr<TrialReport> LaplaceL1TailCheck(int k, double b, double zeta,
                                               std::int64_t trials,
                                               const RngStream& rng,
                                               const AuditOptions& options) {
  if (k < 1 || !(b > 0.0) || !(zeta > 0.0 && zeta < 1.0) || trials < 1) {
    return absl::InvalidArgumentError(
        "requires k >= 1, b > 0, zeta in (0, 1) and trials >= 1");
  }
  const double bound = LaplaceL1TailBound(k, b, zeta);
  const std::vector<std::int64_t> counts = CountOutcomes(
      trials, 2, rng,
      [&](RngStream& s) -> std::size_t {
        double norm = 0.0;
        for (int i = 0; i < k; ++i) norm += std::fabs(Laplace(s, b));
        return norm > bound ? 1 : 0;
      },
      options.execution);
  TrialReport report;
  report.trials = trials;
  const double n = static_cast<double>(trials);
  report.estimate = static_cast<double>(counts[1]) / n;
  const double se = std::sqrt(zeta * (1.0 - zeta) / n);
  report.conf_radius = 1.96 * se;
  report.violated = report.estimate > zeta + 3.0 * se;
  return report;
}

}  // namespace purify

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

#include "purify/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "purify/accounting.h"
#include "purify/adaptive.h"
#include "purify/audit.h"
#include "purify/ball.h"
#include "purify/distributions.h"
#include "purify/erm.h"
#include "purify/frankwolfe.h"
#include "purify/gaussian.h"
#include "purify/purify.h"
#include "purify/queries.h"
#include "purify/trials.h"

namespace purify {
namespace {

using nlohmann::json;
using Row = std::vector<Cell>;

enum class Kind { kInt, kReal, kString, kBool, kIntList, kRealList, kStringList };

struct ParamSpec {
  std::string name;
  Kind kind;
  json fallback;
};

struct ExperimentSchema {
  std::string description;
  std::int64_t trials;
  std::vector<ParamSpec> params;
};

const std::map<std::string, ExperimentSchema>& Schemas() {
  static const auto* schemas = new std::map<std::string, ExperimentSchema>{
      {"figure1",
       {"Laplace vs analytic-Gaussian per-coordinate variance over delta",
        1,
        {{"eps", Kind::kReal, 1.0},
         {"sensitivity", Kind::kReal, 1.0},
         {"delta_min", Kind::kReal, 1e-10},
         {"delta_max", Kind::kReal, 1e-1},
         {"points", Kind::kInt, 37}}}},
      {"tightness",
       {"TV and W-infinity displacement of the uniform-ball tightness pair",
        100000,
        {{"dims", Kind::kIntList, json::array({1, 2})},
         {"delta_tilde", Kind::kReal, 0.5},
         {"radial_bins", Kind::kInt, 100}}}},
      {"purify-demo",
       {"l1 displacement of purification on uniform inputs",
        1000,
        {{"d", Kind::kInt, 2},
         {"norm", Kind::kString, "l2"},
         {"radius", Kind::kReal, 1.0},
         {"eps", Kind::kReal, 1.0},
         {"eps_prime", Kind::kReal, 1.0},
         {"delta", Kind::kReal, 1e-10},
         {"omega", Kind::kReal, 0.01}}}},
      {"erm-sgd",
       {"excess risk of DP-SGD, Laplace GD or purified DP-SGD on a quadratic",
        5,
        {{"variant", Kind::kString, "purified"},
         {"n_values", Kind::kIntList, json::array({250, 1000})},
         {"d", Kind::kInt, 5},
         {"eps", Kind::kReal, 1.0},
         {"C", Kind::kReal, 1.0},
         {"spread", Kind::kReal, 0.3},
         {"delta", Kind::kReal, 1e-6}}}},
      {"erm-fw",
       {"purified Frank-Wolfe on an l1-constrained quadratic",
        5,
        {{"n_values", Kind::kIntList, json::array({400})},
         {"d", Kind::kInt, 30},
         {"eps", Kind::kReal, 1.0},
         {"radius", Kind::kReal, 1.0},
         {"spread", Kind::kReal, 0.1}}}},
      {"ptr",
       {"pure propose-test-release for the median",
        200,
        {{"n_values", Kind::kIntList, json::array({1001})},
         {"lo", Kind::kReal, 0.0},
         {"hi", Kind::kReal, 1.0},
         {"eps", Kind::kReal, 1.0},
         {"eps_prime", Kind::kReal, 1.0},
         {"log_delta", Kind::kReal, -20.0},
         {"beta", Kind::kReal, 0.1},
         {"omega", Kind::kReal, 0.01}}}},
      {"local-sens",
       {"pure release with private local-sensitivity bound, clipped sum",
        200,
        {{"n_values", Kind::kIntList, json::array({100, 400})},
         {"d", Kind::kInt, 4},
         {"eps", Kind::kReal, 1.0},
         {"row_radius", Kind::kReal, 1.0}}}},
      {"mode",
       {"pure mode release on a gap instance",
        1000,
        {{"universe_size", Kind::kInt, 256},
         {"eps", Kind::kReal, 1.0},
         {"mode_item", Kind::kInt, 77},
         {"base_count", Kind::kInt, 40},
         {"enforce_threshold", Kind::kBool, false}}}},
      {"adassp",
       {"purified AdaSSP linear regression",
        20,
        {{"n_values", Kind::kIntList, json::array({200, 800, 3200})},
         {"d", Kind::kInt, 5},
         {"eps", Kind::kReal, 1.0},
         {"eps_prime", Kind::kReal, 1.0},
         {"omega", Kind::kReal, 0.0},
         {"zeta", Kind::kReal, 0.05},
         {"x_bound", Kind::kReal, 1.0},
         {"theta_norm", Kind::kReal, 1.0}}}},
      {"mwem",
       {"pure MWEM: MWEM, sampled and purified query error",
        10,
        {{"n", Kind::kInt, 1000},
         {"d", Kind::kInt, 5},
         {"K", Kind::kInt, 20},
         {"T_values", Kind::kIntList, json::array({1, 5, 20})},
         {"eps", Kind::kReal, 1.0},
         {"bit_budget", Kind::kInt, 4096},
         {"t_cap", Kind::kInt, 500}}}},
      {"audit",
       {"empirical max divergence of purified and folklore-mixed toys",
        1000000,
        {{"instances", Kind::kStringList,
          json::array({"purify-discrete", "folklore"})},
         {"eps", Kind::kReal, 1.0},
         {"bits", Kind::kInt, 4},
         {"delta_fraction", Kind::kReal, 0.5},
         {"folklore_size", Kind::kInt, 64},
         {"folklore_eps", Kind::kReal, 0.5},
         {"folklore_delta", Kind::kReal, 0.01},
         {"omega", Kind::kReal, 0.1}}}},
  };
  return *schemas;
}

bool IsIntegral(const json& v) {
  if (v.is_number_integer()) return true;
  if (!v.is_number_float()) return false;
  const double x = v.get<double>();
  return std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 9e15;
}

absl::StatusOr<json> Coerce(const std::string& name, Kind kind,
                            const json& v) {
  auto mismatch = [&](const char* want) {
    return absl::InvalidArgumentError(
        absl::StrCat("param '", name, "' must be ", want));
  };
  auto list = [&](Kind elem, const char* want) -> absl::StatusOr<json> {
    if (!v.is_array()) return mismatch(want);
    json out = json::array();
    for (const json& e : v) {
      auto c = Coerce(name, elem, e);
      if (!c.ok()) return mismatch(want);
      out.push_back(*c);
    }
    return out;
  };
  switch (kind) {
    case Kind::kInt:
      if (!IsIntegral(v)) return mismatch("an integer");
      return json(v.is_number_integer() ? v.get<std::int64_t>()
                                        : static_cast<std::int64_t>(v.get<double>()));
    case Kind::kReal:
      if (!v.is_number()) return mismatch("a number");
      return json(v.get<double>());
    case Kind::kString:
      if (!v.is_string()) return mismatch("a string");
      return v;
    case Kind::kBool:
      if (!v.is_boolean()) return mismatch("a boolean");
      return v;
    case Kind::kIntList:
      return list(Kind::kInt, "a list of integers");
    case Kind::kRealList:
      return list(Kind::kReal, "a list of numbers");
    case Kind::kStringList:
      return list(Kind::kString, "a list of strings");
  }
  return mismatch("valid");
}

struct Params {
  const json& j;
  double Real(const char* k) const { return j.at(k).get<double>(); }
  std::int64_t Int(const char* k) const { return j.at(k).get<std::int64_t>(); }
  std::string Str(const char* k) const { return j.at(k).get<std::string>(); }
  bool Bool(const char* k) const { return j.at(k).get<bool>(); }
  std::vector<std::int64_t> Ints(const char* k) const {
    return j.at(k).get<std::vector<std::int64_t>>();
  }
  std::vector<std::string> Strs(const char* k) const {
    return j.at(k).get<std::vector<std::string>>();
  }
};

struct TrialRows {
  absl::Status status;
  std::vector<Row> rows;
};

using TrialFn = std::function<absl::StatusOr<std::vector<Row>>(
    std::int64_t trial, RngStream& rng)>;

// Appends rows of trials 0..trials-1 drawn from RngStream(seed, stream).
absl::Status RunTrials(std::uint64_t seed, std::uint64_t stream,
                       std::int64_t trials, const TrialFn& fn,
                       std::vector<Row>& rows) {
  auto results = MapTrials<TrialRows>(
      trials, RngStream(seed, stream),
      [&](std::int64_t i, RngStream& rng) {
        TrialRows out;
        auto r = fn(i, rng);
        if (r.ok()) {
          out.rows = *std::move(r);
        } else {
          out.status = r.status();
        }
        return out;
      },
      Execution::kParallel);
  for (auto& r : results) {
    if (!r.status.ok()) return r.status;
    for (auto& row : r.rows) rows.push_back(std::move(row));
  }
  return absl::OkStatus();
}

absl::StatusOr<Norm> ParseNorm(const std::string& s) {
  if (s == "l1") return Norm::kL1;
  if (s == "l2") return Norm::kL2;
  if (s == "linf") return Norm::kLinf;
  return absl::InvalidArgumentError(
      absl::StrCat("norm must be l1, l2 or linf, got '", s, "'"));
}

std::int64_t Trials(const json& resolved) {
  return resolved.at("trials").get<std::int64_t>();
}

std::uint64_t Seed(const json& resolved) {
  return resolved.at("seed").get<std::uint64_t>();
}

// Diagnostics.

using Diagnostics = std::vector<std::string>;

void Require(bool ok, Diagnostics& out, std::string message) {
  if (!ok) out.push_back(std::move(message));
}

void CheckPositive(const Params& p, const char* key, Diagnostics& out) {
  Require(p.Real(key) > 0, out, absl::StrCat(key, " must be positive"));
}

void CheckSizes(const Params& p, const char* key, std::int64_t min,
                Diagnostics& out) {
  const auto v = p.Ints(key);
  Require(!v.empty(), out, absl::StrCat(key, " must not be empty"));
  for (auto n : v) {
    Require(n >= min, out, absl::StrCat(key, " entries must be at least ", min));
  }
}

Diagnostics ValidateParams(const std::string& name, const json& resolved) {
  Diagnostics out;
  const Params p{resolved.at("params")};
  Require(Trials(resolved) >= 1, out, "trials must be at least 1");
  if (name == "figure1") {
    CheckPositive(p, "eps", out);
    CheckPositive(p, "sensitivity", out);
    const double lo = p.Real("delta_min"), hi = p.Real("delta_max");
    Require(lo > 0 && lo < hi && hi < 1, out,
            "need 0 < delta_min < delta_max < 1");
    Require(p.Int("points") >= 2, out, "points must be at least 2");
  } else if (name == "tightness") {
    const double dt = p.Real("delta_tilde");
    Require(dt > 0 && dt < 1, out, "delta_tilde must lie in (0, 1)");
    CheckSizes(p, "dims", 1, out);
    for (auto d : p.Ints("dims")) {
      Require(d <= 2, out, "dims entries must be 1 or 2");
    }
    Require(p.Int("radial_bins") >= 1, out, "radial_bins must be at least 1");
  } else if (name == "purify-demo") {
    Require(p.Int("d") >= 1, out, "d must be at least 1");
    Require(ParseNorm(p.Str("norm")).ok(), out, "norm must be l1, l2 or linf");
    CheckPositive(p, "radius", out);
    CheckPositive(p, "eps", out);
    CheckPositive(p, "eps_prime", out);
    const double delta = p.Real("delta"), omega = p.Real("omega");
    Require(delta > 0 && delta < 1, out, "delta must lie in (0, 1)");
    Require(omega > 0 && omega <= 1, out, "omega must lie in (0, 1]");
  } else if (name == "erm-sgd") {
    const std::string variant = p.Str("variant");
    Require(variant == "purified" || variant == "dpsgd" ||
                variant == "laplace-gd",
            out, "variant must be purified, dpsgd or laplace-gd");
    CheckSizes(p, "n_values", 2, out);
    const std::int64_t d = p.Int("d");
    Require(d >= 1, out, "d must be at least 1");
    CheckPositive(p, "eps", out);
    CheckPositive(p, "C", out);
    CheckPositive(p, "spread", out);
    const double delta = p.Real("delta");
    Require(delta > 0 && delta < 1, out, "delta must lie in (0, 1)");
    if (!out.empty() || variant == "laplace-gd") return out;
    const double eps = p.Real("eps");
    for (auto n : p.Ints("n_values")) {
      double log_inv_delta = -std::log(delta);
      if (variant == "purified") {
        auto pp = PurifyHyperParamsSgd(n, static_cast<int>(d), p.Real("C"));
        if (!pp.ok()) {
          out.push_back(std::string(pp.status().message()));
          continue;
        }
        log_inv_delta = -pp->delta.log();
      }
      const double bound = std::min<double>(d, 8) * log_inv_delta;
      Require(eps <= bound, out,
              absl::StrCat("eps = ", eps,
                           " exceeds the DP-SGD convergence bound "
                           "(d ^ 8) log(1/delta) = ",
                           bound, " at n = ", n));
    }
  } else if (name == "erm-fw") {
    CheckSizes(p, "n_values", 2, out);
    Require(p.Int("d") >= 1, out, "d must be at least 1");
    CheckPositive(p, "eps", out);
    CheckPositive(p, "radius", out);
    CheckPositive(p, "spread", out);
  } else if (name == "ptr") {
    CheckSizes(p, "n_values", 1, out);
    Require(p.Real("lo") < p.Real("hi"), out, "need lo < hi");
    CheckPositive(p, "eps", out);
    CheckPositive(p, "eps_prime", out);
    CheckPositive(p, "beta", out);
    Require(p.Real("log_delta") < 0, out, "log_delta must be negative");
    const double omega = p.Real("omega");
    Require(omega > 0 && omega <= 1, out, "omega must lie in (0, 1]");
  } else if (name == "local-sens") {
    CheckSizes(p, "n_values", 1, out);
    Require(p.Int("d") >= 1, out, "d must be at least 1");
    CheckPositive(p, "eps", out);
    const double r = p.Real("row_radius");
    Require(r > 0 && r <= 1, out, "row_radius must lie in (0, 1]");
  } else if (name == "mode") {
    const std::int64_t u = p.Int("universe_size");
    Require(u >= 3, out, "universe_size must be at least 3");
    Require(p.Int("mode_item") >= 0 && p.Int("mode_item") < u, out,
            "mode_item must lie in the universe");
    Require(p.Int("base_count") >= 0, out, "base_count must be nonnegative");
    CheckPositive(p, "eps", out);
  } else if (name == "adassp") {
    CheckSizes(p, "n_values", 2, out);
    Require(p.Int("d") >= 1, out, "d must be at least 1");
    CheckPositive(p, "eps", out);
    CheckPositive(p, "eps_prime", out);
    CheckPositive(p, "x_bound", out);
    CheckPositive(p, "theta_norm", out);
    const double zeta = p.Real("zeta"), omega = p.Real("omega");
    Require(zeta > 0 && zeta < 1, out, "zeta must lie in (0, 1)");
    Require(omega >= 0 && omega <= 1, out,
            "omega must lie in [0, 1] (0 selects 1/n^2)");
  } else if (name == "mwem") {
    const std::int64_t d = p.Int("d");
    Require(d >= 1 && d <= 30, out, "d must lie in [1, 30]");
    Require(p.Int("n") >= 1, out, "n must be at least 1");
    Require(p.Int("K") >= 1, out, "K must be at least 1");
    Require(p.Int("t_cap") >= 1, out, "t_cap must be at least 1");
    CheckPositive(p, "eps", out);
    for (auto t : p.Ints("T_values")) {
      Require(t >= 1, out, "T_values entries must be at least 1");
    }
    if (!out.empty()) return out;
    PureMwemOptions options;
    options.bit_budget = p.Int("bit_budget");
    options.t_cap = p.Int("t_cap");
    auto plan = MakePureMwemPlan(p.Int("n"), static_cast<int>(d), p.Real("eps"),
                                 options);
    if (!plan.ok()) out.push_back(std::string(plan.status().message()));
  } else if (name == "audit") {
    for (const auto& s : p.Strs("instances")) {
      Require(s == "purify-discrete" || s == "folklore", out,
              absl::StrCat("unknown audit instance '", s, "'"));
    }
    CheckPositive(p, "eps", out);
    CheckPositive(p, "folklore_eps", out);
    Require(p.Int("bits") >= 2 && p.Int("bits") <= 6, out,
            "bits must lie in [2, 6]");
    Require(p.Int("folklore_size") >= 3 && p.Int("folklore_size") <= 64, out,
            "folklore_size must lie in [3, 64]");
    const double frac = p.Real("delta_fraction");
    Require(frac > 0 && frac < 1, out, "delta_fraction must lie in (0, 1)");
    const double fd = p.Real("folklore_delta"), omega = p.Real("omega");
    Require(fd > 0 && fd < 1, out, "folklore_delta must lie in (0, 1)");
    Require(omega > 0 && omega <= 1, out, "omega must lie in (0, 1]");
  }
  return out;
}

// Experiments.

absl::StatusOr<Table> Figure1(const json& resolved) {
  const Params p{resolved.at("params")};
  const double eps = p.Real("eps"), sens = p.Real("sensitivity");
  const double lo = std::log(p.Real("delta_min"));
  const double hi = std::log(p.Real("delta_max"));
  const std::int64_t points = p.Int("points");
  Table t{{"delta", "laplace_var", "gaussian_var"}, {}};
  const double laplace_var = 2.0 * (sens / eps) * (sens / eps);
  for (std::int64_t i = 0; i < points; ++i) {
    const double delta =
        i == 0            ? p.Real("delta_min")
        : i + 1 == points ? p.Real("delta_max")
                          : std::exp(lo + (hi - lo) * i / double(points - 1));
    auto sigma = AnalyticGaussianSigma(eps, delta, sens);
    if (!sigma.ok()) return sigma.status();
    t.rows.push_back({delta, laplace_var, *sigma * *sigma});
  }
  return t;
}

absl::StatusOr<Table> Tightness(const json& resolved) {
  const Params p{resolved.at("params")};
  const double dt = p.Real("delta_tilde");
  const std::int64_t trials = Trials(resolved);
  Table t{{"d", "delta_tilde", "trials", "tv_estimate", "conf_radius",
           "expected_tv", "w8_displacement", "grid_step", "witness_tv"},
          {}};
  const auto dims = p.Ints("dims");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int d = static_cast<int>(dims[i]);
    auto rep = TightnessCheck(d, dt, trials, RngStream(Seed(resolved), i),
                              Norm::kL2, static_cast<int>(p.Int("radial_bins")));
    if (!rep.ok()) return rep.status();
    t.rows.push_back({std::int64_t{d}, dt, trials, rep->tv.estimate,
                      rep->tv.conf_radius, std::pow(dt, d),
                      rep->w8_displacement, rep->grid_step, rep->witness_tv});
  }
  return t;
}

absl::StatusOr<Table> PurifyDemo(const json& resolved) {
  const Params p{resolved.at("params")};
  auto q = ParseNorm(p.Str("norm"));
  if (!q.ok()) return q.status();
  const int d = static_cast<int>(p.Int("d"));
  auto ball = LqBall::Centered(*q, d, p.Real("radius"));
  if (!ball.ok()) return ball.status();
  auto params = MakePurifyParams(*ball, p.Real("eps"), p.Real("eps_prime"),
                                 p.Real("delta"), p.Real("omega"));
  if (!params.ok()) return params.status();
  const double bound = PurifyL1ErrorBound(*ball, *params);
  Table t{{"trial", "d", "l1_displacement", "l1_bound", "mixed"}, {}};
  absl::Status s = RunTrials(
      Seed(resolved), 0, Trials(resolved),
      [&](std::int64_t i, RngStream& rng) -> absl::StatusOr<std::vector<Row>> {
        RngStream gen = rng.Substream(0), mech = rng.Substream(1);
        const std::vector<double> x = SampleUniformBall(*ball, gen);
        auto r = Purify(x, *ball, *params, mech);
        if (!r.ok()) return r.status();
        return std::vector<Row>{{i, std::int64_t{d},
                                 Distance(r->x, x, Norm::kL1), bound,
                                 std::int64_t{r->mixed}}};
      },
      t.rows);
  if (!s.ok()) return s;
  return t;
}

absl::StatusOr<Table> ErmSgd(const json& resolved) {
  const Params p{resolved.at("params")};
  const std::string variant = p.Str("variant");
  const int d = static_cast<int>(p.Int("d"));
  const double eps = p.Real("eps"), C = p.Real("C");
  auto domain = LqBall::Centered(Norm::kL2, d, C / 2);
  if (!domain.ok()) return domain.status();
  auto problem = QuadraticProblem::Create(*domain);
  if (!problem.ok()) return problem.status();
  const QuadraticProblem& prob = **problem;
  Table t{{"n", "d", "eps", "excess_risk", "displacement"}, {}};
  const auto ns = p.Ints("n_values");
  for (std::size_t g = 0; g < ns.size(); ++g) {
    const std::int64_t n = ns[g];
    absl::Status s = RunTrials(
        Seed(resolved), g, Trials(resolved),
        [&](std::int64_t, RngStream& rng) -> absl::StatusOr<std::vector<Row>> {
          RngStream gen = rng.Substream(0), mech = rng.Substream(1);
          const Dataset data =
              MakeQuadraticData(prob.domain(), n, p.Real("spread"), gen);
          const double best = prob.EmpiricalRisk(prob.Minimizer(data), data);
          std::vector<double> theta;
          double displacement = 0.0;
          if (variant == "purified") {
            auto r = PurifiedDpsgd(prob, data, eps, mech);
            if (!r.ok()) return r.status();
            theta = r->theta_pure;
            displacement = Distance(r->theta_pure, r->theta_apx, Norm::kL2);
          } else if (variant == "dpsgd") {
            auto hp = ComputeSgdHyperParams(n, d, eps, p.Real("delta"),
                                            prob.lipschitz(), C);
            if (!hp.ok()) return hp.status();
            auto r = Dpsgd(prob, data, *hp, mech);
            if (!r.ok()) return r.status();
            theta = r->theta;
          } else {
            auto r = LaplaceNoisyGd(prob, data, eps, mech);
            if (!r.ok()) return r.status();
            theta = r->theta;
          }
          return std::vector<Row>{{n, std::int64_t{d}, eps,
                                   prob.EmpiricalRisk(theta, data) - best,
                                   displacement}};
        },
        t.rows);
    if (!s.ok()) return s;
  }
  return t;
}

absl::StatusOr<Table> ErmFw(const json& resolved) {
  const Params p{resolved.at("params")};
  const int d = static_cast<int>(p.Int("d"));
  const double eps = p.Real("eps");
  auto domain = LqBall::Centered(Norm::kL1, d, p.Real("radius"));
  if (!domain.ok()) return domain.status();
  auto problem = QuadraticProblem::Create(*domain);
  if (!problem.ok()) return problem.status();
  const QuadraticProblem& prob = **problem;
  Table t{{"n", "d", "eps", "T", "k", "excess_risk", "recovery_error"}, {}};
  const auto ns = p.Ints("n_values");
  for (std::size_t g = 0; g < ns.size(); ++g) {
    const std::int64_t n = ns[g];
    absl::Status s = RunTrials(
        Seed(resolved), g, Trials(resolved),
        [&](std::int64_t, RngStream& rng) -> absl::StatusOr<std::vector<Row>> {
          RngStream gen = rng.Substream(0), mech = rng.Substream(1);
          const Dataset data =
              MakeQuadraticData(prob.domain(), n, p.Real("spread"), gen);
          const double best = prob.EmpiricalRisk(prob.Minimizer(data), data);
          auto r = PurifiedFrankWolfe(prob, data, eps, mech);
          if (!r.ok()) return r.status();
          return std::vector<Row>{
              {n, std::int64_t{d}, eps, r->T, std::int64_t{r->k},
               prob.EmpiricalRisk(r->theta, data) - best, r->recovery_error()}};
        },
        t.rows);
    if (!s.ok()) return s;
  }
  return t;
}

const std::vector<std::string> kAdaptiveColumns = {
    "mechanism", "n", "d", "eps", "error_metric", "aborted_flag"};

absl::StatusOr<Table> PtrExperiment(const json& resolved) {
  const Params p{resolved.at("params")};
  const double lo = p.Real("lo"), hi = p.Real("hi"), eps = p.Real("eps");
  auto spec = MedianQuerySpec(lo, hi);
  if (!spec.ok()) return spec.status();
  const LogProbability delta = LogProbability::FromLog(p.Real("log_delta"));
  Table t{kAdaptiveColumns, {}};
  const auto ns = p.Ints("n_values");
  for (std::size_t g = 0; g < ns.size(); ++g) {
    const std::int64_t n = ns[g];
    absl::Status s = RunTrials(
        Seed(resolved), g, Trials(resolved),
        [&](std::int64_t, RngStream& rng) -> absl::StatusOr<std::vector<Row>> {
          RngStream gen = rng.Substream(0), mech = rng.Substream(1);
          RealDataset data(n);
          for (auto& row : data) row = {UniformReal(gen, lo, hi)};
          const double truth = spec->query(data)[0];
          auto r = PurePtr(*spec, data, eps, p.Real("eps_prime"), delta,
                           p.Real("beta"), p.Real("omega"), mech);
          if (!r.ok()) return r.status();
          return std::vector<Row>{{std::string("ptr"), n, std::int64_t{1}, eps,
                                   std::fabs(r->value[0] - truth),
                                   std::int64_t{r->bottom}}};
        },
        t.rows);
    if (!s.ok()) return s;
  }
  return t;
}

absl::StatusOr<Table> LocalSens(const json& resolved) {
  const Params p{resolved.at("params")};
  const int d = static_cast<int>(p.Int("d"));
  const double eps = p.Real("eps");
  auto row_ball = LqBall::Centered(Norm::kL2, d, p.Real("row_radius"));
  if (!row_ball.ok()) return row_ball.status();
  Table t{kAdaptiveColumns, {}};
  const auto ns = p.Ints("n_values");
  for (std::size_t g = 0; g < ns.size(); ++g) {
    const std::int64_t n = ns[g];
    auto spec = SumQuerySpec(d, n);
    if (!spec.ok()) return spec.status();
    auto defaults = MakeLocalSensitivityDefaults(d, spec->domain->diameter(), eps);
    if (!defaults.ok()) return defaults.status();
    absl::Status s = RunTrials(
        Seed(resolved), g, Trials(resolved),
        [&](std::int64_t, RngStream& rng) -> absl::StatusOr<std::vector<Row>> {
          RngStream gen = rng.Substream(0), mech = rng.Substream(1);
          RealDataset data(n);
          for (auto& row : data) row = SampleUniformBall(*row_ball, gen);
          const std::vector<double> truth = spec->query(data);
          auto r = PrivateLocalSensitivityRelease(*spec, data, eps,
                                                  defaults->delta,
                                                  defaults->omega, mech);
          if (!r.ok()) return r.status();
          return std::vector<Row>{{std::string("local-sens"), n,
                                   std::int64_t{d}, eps,
                                   Distance(r->q_pure, truth, Norm::kL2),
                                   std::int64_t{r->beta_clamped}}};
        },
        t.rows);
    if (!s.ok()) return s;
  }
  return t;
}

absl::StatusOr<Table> Mode(const json& resolved) {
  const Params p{resolved.at("params")};
  const auto u = static_cast<std::uint64_t>(p.Int("universe_size"));
  const auto mode = static_cast<std::uint64_t>(p.Int("mode_item"));
  const double eps = p.Real("eps");
  const std::int64_t base = p.Int("base_count");
  const auto gap = static_cast<std::int64_t>(std::ceil(ModeGapRequirement(u, eps)));
  std::vector<std::uint64_t> data(base + gap, mode);
  data.insert(data.end(), base, (mode + 1) % u);
  data.insert(data.end(), base * 3 / 4, (mode + 2) % u);
  ModeOptions options;
  options.enforce_discrete_threshold = p.Bool("enforce_threshold");
  const auto n = static_cast<std::int64_t>(data.size());
  const std::int64_t d = BitWidth(u);
  Table t{kAdaptiveColumns, {}};
  absl::Status s = RunTrials(
      Seed(resolved), 0, Trials(resolved),
      [&](std::int64_t, RngStream& rng) -> absl::StatusOr<std::vector<Row>> {
        auto r = ModeRelease(data, u, eps, rng, options);
        if (!r.ok()) return r.status();
        return std::vector<Row>{{std::string("mode"), n, d, eps,
                                 double(r->item != mode),
                                 std::int64_t{r->bottom}}};
      },
      t.rows);
  if (!s.ok()) return s;
  return t;
}

absl::StatusOr<Table> AdasspExperiment(const json& resolved) {
  const Params p{resolved.at("params")};
  const int d = static_cast<int>(p.Int("d"));
  const double eps = p.Real("eps"), xb = p.Real("x_bound");
  const Eigen::VectorXd theta_star =
      Eigen::VectorXd::Constant(d, p.Real("theta_norm") / std::sqrt(double(d)));
  AdasspOptions options;
  options.zeta = p.Real("zeta");
  Table t{kAdaptiveColumns, {}};
  const auto ns = p.Ints("n_values");
  for (std::size_t g = 0; g < ns.size(); ++g) {
    const std::int64_t n = ns[g];
    const double omega =
        p.Real("omega") > 0 ? p.Real("omega") : 1.0 / (double(n) * n);
    absl::Status s = RunTrials(
        Seed(resolved), g, Trials(resolved),
        [&](std::int64_t, RngStream& rng) -> absl::StatusOr<std::vector<Row>> {
          RngStream gen = rng.Substream(0), mech = rng.Substream(1);
          const RegressionInstance inst =
              MakeRegressionInstance(n, theta_star, xb, gen);
          const LogProbability delta = DefaultAdasspDelta(
              n, d, eps, omega, options.zeta, xb, inst.y_bound);
          auto r = PureAdassp(inst, eps, p.Real("eps_prime"), delta, omega,
                              mech, options);
          if (!r.ok()) return r.status();
          return std::vector<Row>{{std::string("adassp"), n, std::int64_t{d},
                                   eps, RegressionMse(inst, r->theta_pure),
                                   std::int64_t{r->mixed}}};
        },
        t.rows);
    if (!s.ok()) return s;
  }
  return t;
}

absl::StatusOr<Table> MwemExperiment(const json& resolved) {
  const Params p{resolved.at("params")};
  const std::int64_t n = p.Int("n"), k = p.Int("K");
  const int d = static_cast<int>(p.Int("d"));
  const double eps = p.Real("eps");
  std::vector<std::optional<std::int64_t>> ts;
  for (auto v : p.Ints("T_values")) ts.push_back(v);
  if (ts.empty()) ts.push_back(std::nullopt);
  Table t{{"n", "d", "K", "T", "m", "eps", "linf_error", "stage"}, {}};
  for (std::size_t g = 0; g < ts.size(); ++g) {
    PureMwemOptions options;
    options.bit_budget = p.Int("bit_budget");
    options.t_cap = p.Int("t_cap");
    options.t_override = ts[g];
    absl::Status s = RunTrials(
        Seed(resolved), g, Trials(resolved),
        [&](std::int64_t, RngStream& rng) -> absl::StatusOr<std::vector<Row>> {
          RngStream gen = rng.Substream(0), mech = rng.Substream(1);
          const QueryWorkload w =
              QueryWorkload::RandomBinary(d, static_cast<int>(k), gen);
          const HistogramDataset data =
              HistogramDataset::Random(w.universe_size(), n, gen);
          auto r = PureMwem(data, w, eps, mech, options);
          if (!r.ok()) return r.status();
          auto truth = EvalQueries(w, data);
          if (!truth.ok()) return truth.status();
          std::vector<double> dist(r->synthetic.size());
          for (std::size_t x = 0; x < dist.size(); ++x) {
            dist[x] = r->synthetic[x] / double(n);
          }
          auto mwem = EvalQueries(w, dist);
          auto sampled = EvalQueriesOnItems(w, r->sampled);
          auto purified = EvalQueriesOnItems(w, r->items);
          if (!mwem.ok()) return mwem.status();
          if (!sampled.ok()) return sampled.status();
          if (!purified.ok()) return purified.status();
          std::vector<Row> rows;
          auto add = [&](const std::vector<double>& est, const char* stage) {
            rows.push_back({n, std::int64_t{d}, k, r->plan.T, r->plan.m, eps,
                            LinfDistance(*truth, est), std::string(stage)});
          };
          add(*mwem, "mwem");
          add(*sampled, "sampled");
          add(*purified, "purified");
          return rows;
        },
        t.rows);
    if (!s.ok()) return s;
  }
  return t;
}

// Randomized response over the first size-1 outcomes favoring `favored`; with
// probability delta, outcome size-1 instead.
std::size_t ToyMechanism(RngStream& r, std::size_t size, std::size_t favored,
                         double eps, double delta) {
  if (delta > 0 && Uniform01(r) < delta) return size - 1;
  const std::size_t k = size - 1;
  const double e = std::exp(eps);
  if (Uniform01(r) < e / (e + double(k - 1))) return favored;
  const std::size_t j = UniformIndex(r, k - 1);
  return j >= favored ? j + 1 : j;
}

absl::StatusOr<Table> Audit(const json& resolved) {
  const Params p{resolved.at("params")};
  const std::int64_t trials = Trials(resolved);
  Table t{{"instance", "direction", "outcomes", "claimed_eps", "estimate",
           "trials", "conf_radius", "one_sided_outcomes", "consistent"},
          {}};
  const auto instances = p.Strs("instances");
  for (std::size_t g = 0; g < instances.size(); ++g) {
    const std::string& name = instances[g];
    std::size_t size = 0;
    double claimed = 0.0;
    DiscreteSampler a, b;
    if (name == "purify-discrete") {
      const int bits = static_cast<int>(p.Int("bits"));
      const double eps = p.Real("eps");
      size = std::size_t{1} << bits;
      auto threshold = DiscreteDeltaThreshold(bits, eps);
      if (!threshold.ok()) return threshold.status();
      const LogProbability delta = LogProbability::FromLog(
          threshold->log() + std::log(p.Real("delta_fraction")));
      claimed = 2 * eps;
      auto arm = [=](std::size_t favored, double leak) {
        return [=](RngStream& r) -> std::size_t {
          const std::size_t u = ToyMechanism(r, size, favored, eps, leak);
          auto out = PurifyDiscrete(u, size, eps, delta, r);
          return out.ok() ? out->index : size;
        };
      };
      a = arm(0, 0.0);
      b = arm(1, delta.value());
    } else {
      size = static_cast<std::size_t>(p.Int("folklore_size"));
      const double eps = p.Real("folklore_eps");
      const double delta = p.Real("folklore_delta");
      const double omega = p.Real("omega");
      auto mix = FolkloreMixEpsilon(size, eps, delta, omega);
      if (!mix.ok()) return mix.status();
      claimed = *mix;
      auto arm = [=](std::size_t favored, double leak) {
        return [=](RngStream& r) -> std::size_t {
          return FolkloreMix(ToyMechanism(r, size, favored, eps, leak), size,
                             omega, r);
        };
      };
      a = arm(0, 0.0);
      b = arm(1, delta);
    }
    auto rep = EstimateMaxDivergence(a, b, size, trials,
                                     RngStream(Seed(resolved), g));
    if (!rep.ok()) return rep.status();
    const std::int64_t consistent = rep->ConsistentWith(claimed);
    for (const auto& [direction, report] :
         {std::pair<const char*, const TrialReport*>{"a_over_b", &rep->a_over_b},
          {"b_over_a", &rep->b_over_a}}) {
      t.rows.push_back({name, std::string(direction), std::int64_t(size),
                        claimed, report->estimate, report->trials,
                        report->conf_radius,
                        std::int64_t{rep->one_sided_outcomes}, consistent});
    }
  }
  return t;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::vector<std::string> ExperimentNames() {
  std::vector<std::string> names;
  for (const auto& [name, schema] : Schemas()) names.push_back(name);
  return names;
}

bool IsExperiment(const std::string& name) {
  return Schemas().count(name) > 0;
}

absl::StatusOr<ExperimentConfig> ParseConfig(const std::string& text) {
  json doc = json::parse(text, nullptr, false, true);
  if (doc.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  ExperimentConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "experiment") {
      if (!value.is_string()) {
        return absl::InvalidArgumentError("experiment must be a string");
      }
      config.experiment = value.get<std::string>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !(IsIntegral(value) && value.get<double>() >= 0)) {
        return absl::InvalidArgumentError("seed must be a nonnegative integer");
      }
      config.seed = value.is_number_unsigned() ? value.get<std::uint64_t>()
                                               : static_cast<std::uint64_t>(value.get<double>());
    } else if (key == "trials") {
      if (!IsIntegral(value)) {
        return absl::InvalidArgumentError("trials must be an integer");
      }
      config.trials = value.is_number_integer()
                          ? value.get<std::int64_t>()
                          : static_cast<std::int64_t>(value.get<double>());
    } else if (key == "params") {
      if (!value.is_object()) {
        return absl::InvalidArgumentError("params must be an object");
      }
      config.params = value;
    } else if (key == "output") {
      if (!value.is_string()) {
        return absl::InvalidArgumentError("output must be a string");
      }
      config.output = value.get<std::string>();
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
  }
  if (config.experiment.empty()) {
    return absl::InvalidArgumentError("missing experiment name");
  }
  if (!IsExperiment(config.experiment)) {
    return absl::NotFoundError(
        absl::StrCat("unknown experiment '", config.experiment, "'"));
  }
  return config;
}

absl::StatusOr<json> ResolveConfig(const ExperimentConfig& config) {
  auto it = Schemas().find(config.experiment);
  if (it == Schemas().end()) {
    return absl::NotFoundError(
        absl::StrCat("unknown experiment '", config.experiment, "'"));
  }
  const ExperimentSchema& schema = it->second;
  json params = json::object();
  for (const auto& [key, value] : config.params.items()) {
    const bool known = std::any_of(
        schema.params.begin(), schema.params.end(),
        [&](const ParamSpec& s) { return s.name == key; });
    if (!known) {
      return absl::InvalidArgumentError(absl::StrCat(
          "unknown param '", key, "' for experiment ", config.experiment));
    }
  }
  for (const ParamSpec& spec : schema.params) {
    const json& raw = config.params.contains(spec.name)
                          ? config.params.at(spec.name)
                          : spec.fallback;
    auto v = Coerce(spec.name, spec.kind, raw);
    if (!v.ok()) return v.status();
    params[spec.name] = *v;
  }
  json resolved = json::object();
  resolved["experiment"] = config.experiment;
  resolved["trials"] = config.trials.value_or(schema.trials);
  resolved["seed"] = config.seed.has_value() ? json(*config.seed) : json(nullptr);
  resolved["params"] = params;
  return resolved;
}

std::vector<std::string> Validate(const ExperimentConfig& config) {
  auto resolved = ResolveConfig(config);
  if (!resolved.ok()) return {std::string(resolved.status().message())};
  return ValidateParams(config.experiment, *resolved);
}

std::uint64_t ConfigHash(const json& resolved) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : resolved.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

absl::StatusOr<Table> RunExperiment(const ExperimentConfig& config) {
  if (!config.seed.has_value()) {
    return absl::InvalidArgumentError("a seed is required");
  }
  auto resolved = ResolveConfig(config);
  if (!resolved.ok()) return resolved.status();
  Diagnostics diags = ValidateParams(config.experiment, *resolved);
  if (!diags.empty()) {
    return absl::InvalidArgumentError(absl::StrJoin(diags, "; "));
  }
  static const auto* runners =
      new std::map<std::string, std::function<absl::StatusOr<Table>(const json&)>>{
          {"figure1", Figure1},     {"tightness", Tightness},
          {"purify-demo", PurifyDemo}, {"erm-sgd", ErmSgd},
          {"erm-fw", ErmFw},        {"ptr", PtrExperiment},
          {"local-sens", LocalSens}, {"mode", Mode},
          {"adassp", AdasspExperiment}, {"mwem", MwemExperiment},
          {"audit", Audit}};
  return runners->at(config.experiment)(*resolved);
}

absl::StatusOr<std::string> RenderCsv(const json& resolved, const Table& table) {
  std::string out = absl::StrCat(
      "# purify experiment=", resolved.at("experiment").get<std::string>(),
      " config_hash=", Hex64(ConfigHash(resolved)), "\n# config=",
      resolved.dump(), "\n", absl::StrJoin(table.columns, ","), "\n");
  char buf[40];
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const Row& row = table.rows[r];
    if (row.size() != table.columns.size()) {
      return absl::InternalError(absl::StrCat("row ", r, " has ", row.size(),
                                              " cells"));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      if (const double* v = std::get_if<double>(&row[c])) {
        if (!std::isfinite(*v)) {
          return absl::FailedPreconditionError(
              absl::StrCat("non-finite value in row ", r, ", column ",
                           table.columns[c]));
        }
        std::snprintf(buf, sizeof(buf), "%.17g", *v);
        out += buf;
      } else if (const auto* i = std::get_if<std::int64_t>(&row[c])) {
        absl::StrAppend(&out, *i);
      } else {
        out += std::get<std::string>(row[c]);
      }
    }
    out += '\n';
  }
  return out;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Pure differential privacy experiment runner"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  CLI::App* run = app.add_subcommand("run", "Run an experiment, write CSV");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--seed", seed, "Random seed (overrides the config)");
  run->add_option("--out", out_path, "Output CSV path (default: stdout)");
  CLI::App* validate = app.add_subcommand("validate", "Check a config");
  validate->add_option("--config", config_path, "JSON config file")->required();
  CLI::App* list = app.add_subcommand("list", "List experiments");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    for (const auto& [name, schema] : Schemas()) {
      out << name << "\t" << schema.description << "\n";
    }
    return 0;
  }

  auto text = ReadFile(config_path);
  if (!text.ok()) {
    err << "error: " << text.status().message() << "\n";
    return 2;
  }
  auto config = ParseConfig(*text);
  if (!config.ok()) {
    err << "error: " << config.status().message() << "\n";
    return 2;
  }

  if (validate->parsed()) {
    const auto diags = Validate(*config);
    for (const auto& d : diags) out << d << "\n";
    return diags.empty() ? 0 : 1;
  }

  if (seed.has_value()) config->seed = seed;
  if (!out_path.empty()) config->output = out_path;
  if (!config->seed.has_value()) {
    err << "error: --seed is required (or a seed key in the config)\n";
    return 2;
  }
  const auto diags = Validate(*config);
  if (!diags.empty()) {
    for (const auto& d : diags) err << "error: " << d << "\n";
    return 2;
  }
  auto resolved = ResolveConfig(*config);
  if (!resolved.ok()) {
    err << "error: " << resolved.status().message() << "\n";
    return 2;
  }
  auto table = RunExperiment(*config);
  if (!table.ok()) {
    err << "error: " << table.status().message() << "\n";
    return 1;
  }
  auto csv = RenderCsv(*resolved, *table);
  if (!csv.ok()) {
    err << "error: " << csv.status().message() << "\n";
    return 1;
  }
  const std::string summary =
      absl::StrCat(config->experiment, ": ", table->rows.size(),
                   " rows, config_hash=", Hex64(ConfigHash(*resolved)));
  if (config->output.empty()) {
    out << *csv;
    err << summary << "\n";
    return 0;
  }
  std::ofstream file(config->output, std::ios::binary | std::ios::trunc);
  if (!file || !(file << *csv) || !file.flush()) {
    err << "error: cannot write " << config->output << "\n";
    return 1;
  }
  out << summary << " -> " << config->output << "\n";
  return 0;
}

}  // namespace purify

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

#include "purify/queries.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "purify/accounting.h"
#include "purify/alias.h"
#include "purify/distributions.h"
#include "purify/purify.h"

namespace purify {

absl::StatusOr<QueryWorkload> QueryWorkload::Create(
    int d, std::vector<std::vector<double>> tables,
    std::vector<std::string> names) {
  if (d < 1 || d > 30) {
    return absl::InvalidArgumentError("universe dimension must lie in [1, 30]");
  }
  if (tables.empty()) return absl::InvalidArgumentError("empty workload");
  const std::size_t size = std::size_t{1} << d;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    if (tables[k].size() != size) {
      return absl::InvalidArgumentError(
          absl::StrCat("query ", k, " has ", tables[k].size(),
                       " entries, expected ", size));
    }
    for (double v : tables[k]) {
      if (!(v >= 0.0 && v <= 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("query ", k, " has a value outside [0, 1]"));
      }
    }
  }
  if (names.empty()) {
    for (std::size_t k = 0; k < tables.size(); ++k) {
      names.push_back(absl::StrCat("q", k));
    }
  } else if (names.size() != tables.size()) {
    return absl::InvalidArgumentError("one name per query required");
  }
  return QueryWorkload(d, std::move(tables), std::move(names));
}

QueryWorkload QueryWorkload::RandomBinary(int d, int k, RngStream& rng) {
  const std::size_t size = std::size_t{1} << d;
  std::vector<std::vector<double>> tables(k, std::vector<double>(size));
  for (auto& t : tables) {
    for (double& v : t) v = static_cast<double>(rng() >> 63);
  }
  return *Create(d, std::move(tables));
}

absl::StatusOr<HistogramDataset> HistogramDataset::Create(
    std::vector<std::int64_t> counts) {
  if (counts.empty()) return absl::InvalidArgumentError("empty universe");
  std::int64_t n = 0;
  for (std::int64_t c : counts) {
    if (c < 0) return absl::FailedPreconditionError("negative count");
    n += c;
  }
  if (n == 0) return absl::FailedPreconditionError("empty dataset");
  return HistogramDataset(std::move(counts), n);
}

absl::StatusOr<HistogramDataset> HistogramDataset::FromItems(
    const std::vector<std::uint64_t>& items, std::size_t universe_size) {
  std::vector<std::int64_t> counts(universe_size, 0);
  for (std::uint64_t u : items) {
    if (u >= universe_size) {
      return absl::FailedPreconditionError(
          absl::StrCat("item ", u, " outside the universe"));
    }
    ++counts[u];
  }
  return Create(std::move(counts));
}

HistogramDataset HistogramDataset::Random(std::size_t universe_size,
                                          std::int64_t n, RngStream& rng) {
  std::vector<double> w(universe_size);
  for (double& v : w) v = Exponential(rng, 1.0);
  const AliasTable table = *AliasTable::Create(w);
  std::vector<std::int64_t> counts(universe_size, 0);
  for (std::size_t u : table.Sample(rng, n)) ++counts[u];
  return *Create(std::move(counts));
}

std::vector<double> HistogramDataset::Distribution() const {
  std::vector<double> p(counts_.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = static_cast<double>(counts_[i]) / static_cast<double>(n_);
  }
  return p;
}

absl::StatusOr<std::vector<double>> EvalQueries(const QueryWorkload& workload,
                                                const HistogramDataset& data) {
  if (data.universe_size() != workload.universe_size()) {
    return absl::InvalidArgumentError("dataset and workload sizes differ");
  }
  std::vector<double> out(workload.size());
  const auto& counts = data.counts();
  for (std::size_t k = 0; k < workload.size(); ++k) {
    const auto& q = workload.table(k);
    double s = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x) {
      s += q[x] * static_cast<double>(counts[x]);
    }
    out[k] = s / static_cast<double>(data.n());
  }
  return out;
}

absl::StatusOr<std::vector<double>> EvalQueries(const QueryWorkload& workload,
                                                const std::vector<double>& p) {
  if (p.size() != workload.universe_size()) {
    return absl::InvalidArgumentError("distribution and workload sizes differ");
  }
  std::vector<double> out(workload.size());
  for (std::size_t k = 0; k < workload.size(); ++k) {
    const auto& q = workload.table(k);
    double s = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x) s += q[x] * p[x];
    out[k] = s;
  }
  return out;
}

absl::StatusOr<std::vector<double>> EvalQueriesOnItems(
    const QueryWorkload& workload, const std::vector<std::uint64_t>& items) {
  absl::StatusOr<HistogramDataset> h =
      HistogramDataset::FromItems(items, workload.universe_size());
  if (!h.ok()) return h.status();
  return EvalQueries(workload, *h);
}

double LinfDistance(const std::vector<double>& a,
                    const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    m = std::max(m, std::fabs(a[i] - b[i]));
  }
  return m;
}

absl::StatusOr<std::size_t> ExponentialMechanism(
    const std::vector<double>& scores, double eps0, double sensitivity,
    RngStream& rng) {
  if (scores.empty()) return absl::InvalidArgumentError("no candidates");
  if (!(eps0 > 0.0) || !(sensitivity > 0.0)) {
    return absl::InvalidArgumentError("eps0 and sensitivity must be positive");
  }
  const double coef = eps0 / (2.0 * sensitivity);
  std::vector<double> logits(scores.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i]) || scores[i] == std::numeric_limits<double>::infinity()) {
      return absl::InvalidArgumentError("scores must be finite or -inf");
    }
    logits[i] = coef * scores[i];
    top = std::max(top, logits[i]);
  }
  if (!std::isfinite(top)) {
    return absl::InvalidArgumentError("all scores are -inf");
  }
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    total += l;
  }
  const double u = Uniform01(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    acc += logits[i];
    if (u < acc) return i;
  }
  for (std::size_t i = logits.size(); i-- > 0;) {
    if (logits[i] > 0.0) return i;
  }
  return logits.size() - 1;
}

void MultiplicativeWeightsUpdate(std::vector<double>& log_weights,
                                 const std::vector<double>& query,
                                 double measurement, double estimate) {
  const double step = 0.5 * (measurement - estimate);
  for (std::size_t x = 0; x < log_weights.size(); ++x) {
    log_weights[x] += query[x] * step;
  }
}

std::vector<double> NormalizeLogWeights(const std::vector<double>& log_weights) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> p(log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(log_weights[i] - top);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

absl::StatusOr<MwemResult> Mwem(const HistogramDataset& data,
                                const QueryWorkload& workload, std::int64_t T,
                                double rho, RngStream& rng,
                                const MwemOptions& options) {
  if (T < 1) return absl::InvalidArgumentError("T must be at least 1");
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    return absl::InvalidArgumentError("rho must be positive");
  }
  absl::StatusOr<std::vector<double>> truth = EvalQueries(workload, data);
  if (!truth.ok()) return truth.status();
  const std::size_t size = workload.universe_size();
  const double n = static_cast<double>(data.n());

  MwemResult result;
  result.eps0 = std::sqrt(rho / static_cast<double>(T));
  std::vector<double> log_w(size, 0.0);
  std::vector<double> p(size, 1.0 / static_cast<double>(size));
  std::vector<double> sum(size, 0.0);
  std::vector<double> scores(workload.size());
  for (std::int64_t t = 0; t < T; ++t) {
    std::vector<double> est = *EvalQueries(workload, p);
    for (std::size_t k = 0; k < scores.size(); ++k) {
      scores[k] = std::fabs(est[k] - (*truth)[k]);
    }
    absl::StatusOr<std::size_t> k =
        ExponentialMechanism(scores, result.eps0, 1.0 / n, rng);
    if (!k.ok()) return k.status();
    const double m = (*truth)[*k] + options.noise_multiplier *
                                        Laplace(rng, 1.0 / (n * result.eps0));
    MultiplicativeWeightsUpdate(log_w, workload.table(*k), m, est[*k]);
    p = NormalizeLogWeights(log_w);
    for (std::size_t x = 0; x < size; ++x) sum[x] += p[x];
    result.selected.push_back(*k);
    result.measurements.push_back(m);
    if (options.record_distributions) result.distributions.push_back(p);
  }
  result.synthetic.resize(size);
  for (std::size_t x = 0; x < size; ++x) {
    result.synthetic[x] = n * sum[x] / static_cast<double>(T);
  }
  return result;
}

absl::StatusOr<std::vector<std::uint8_t>> EncodeTuple(
    const std::vector<std::uint64_t>& cells, int d) {
  std::vector<std::uint8_t> bits;
  bits.reserve(cells.size() * d);
  for (std::uint64_t c : cells) {
    absl::StatusOr<std::vector<std::uint8_t>> b = BinEmbed(c, d);
    if (!b.ok()) return b.status();
    bits.insert(bits.end(), b->begin(), b->end());
  }
  return bits;
}

absl::StatusOr<std::vector<std::uint64_t>> DecodeTuple(
    const std::vector<std::uint8_t>& bits, int d) {
  if (d < 1 || bits.size() % d != 0) {
    return absl::InvalidArgumentError("bit string is not a whole tuple");
  }
  std::vector<std::uint64_t> cells;
  for (std::size_t i = 0; i < bits.size(); i += d) {
    absl::StatusOr<std::uint64_t> c = BinDecode(
        std::vector<std::uint8_t>(bits.begin() + i, bits.begin() + i + d));
    if (!c.ok()) return c.status();
    cells.push_back(*c);
  }
  return cells;
}

absl::StatusOr<PureMwemPlan> MakePureMwemPlan(std::int64_t n, int d,
                                              double eps,
                                              const PureMwemOptions& options) {
  if (n < 1 || d < 1 || !(eps > 0.0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError("requires n, d >= 1 and eps > 0");
  }
  const double ne = static_cast<double>(n) * eps;
  PureMwemPlan plan;
  plan.T = options.t_override.value_or(std::min<std::int64_t>(
      options.t_cap,
      static_cast<std::int64_t>(std::ceil(options.t_constant *
                                          std::pow(ne, 2.0 / 3.0) *
                                          std::cbrt(static_cast<double>(d))))));
  plan.m = options.m_override.value_or(std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(
             options.m_constant * std::pow(ne / d, 2.0 / 3.0)))));
  if (plan.T < 1 || plan.m < 1) {
    return absl::InvalidArgumentError("T and m must be at least 1");
  }
  plan.bits = plan.m * d;
  if (plan.bits > options.bit_budget) {
    return absl::InvalidArgumentError(
        absl::StrCat("m*d = ", plan.bits, " bits exceeds the bit budget of ",
                     options.bit_budget));
  }
  absl::StatusOr<LogProbability> threshold =
      DiscreteDeltaThreshold(plan.bits, eps);
  if (!threshold.ok()) return threshold.status();
  plan.delta = LogProbability::FromLog(threshold->log() - 1e-9);
  plan.rho = eps * eps / (16.0 * -plan.delta.log());
  return plan;
}

absl::StatusOr<PureMwemResult> PureMwem(const HistogramDataset& data,
                                        const QueryWorkload& workload,
                                        double eps, RngStream& rng,
                                        const PureMwemOptions& options) {
  absl::StatusOr<PureMwemPlan> plan =
      MakePureMwemPlan(data.n(), workload.d(), eps, options);
  if (!plan.ok()) return plan.status();
  PureMwemResult result;
  result.plan = *plan;

  RngStream mwem_rng = rng.Substream(0);
  absl::StatusOr<MwemResult> mwem =
      Mwem(data, workload, plan->T, plan->rho, mwem_rng);
  if (!mwem.ok()) return mwem.status();
  result.synthetic = std::move(mwem->synthetic);

  RngStream sample_rng = rng.Substream(1);
  absl::StatusOr<AliasTable> table = AliasTable::Create(result.synthetic);
  if (!table.ok()) return table.status();
  for (std::size_t u : table->Sample(sample_rng, plan->m)) {
    result.sampled.push_back(u);
  }

  absl::StatusOr<std::vector<std::uint8_t>> bits =
      EncodeTuple(result.sampled, workload.d());
  if (!bits.ok()) return bits.status();
  RngStream purify_rng = rng.Substream(2);
  absl::StatusOr<BitsPurifyResult> pure =
      PurifyBits(*bits, eps, plan->delta, purify_rng);
  if (!pure.ok()) return pure.status();
  result.mixed = pure->mixed;
  absl::StatusOr<std::vector<std::uint64_t>> items =
      DecodeTuple(pure->bits, workload.d());
  if (!items.ok()) return items.status();
  result.items = *std::move(items);
  return result;
}

}  // namespace purify

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

#ifndef PURIFY_QUERIES_H_
#define PURIFY_QUERIES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "purify/log_probability.h"
#include "purify/rng.h"

namespace purify {

// K linear queries over the universe {0,1}^d, each a table of 2^d values in
// [0, 1].
class QueryWorkload {
 public:
  static absl::StatusOr<QueryWorkload> Create(
      int d, std::vector<std::vector<double>> tables,
      std::vector<std::string> names = {});
  // K queries with i.i.d. Uniform{0,1} table entries.
  static QueryWorkload RandomBinary(int d, int k, RngStream& rng);

  int d() const { return d_; }
  std::size_t universe_size() const { return std::size_t{1} << d_; }
  std::size_t size() const { return tables_.size(); }
  const std::vector<double>& table(std::size_t k) const { return tables_[k]; }
  const std::string& name(std::size_t k) const { return names_[k]; }

 private:
  QueryWorkload(int d, std::vector<std::vector<double>> tables,
                std::vector<std::string> names)
      : d_(d), tables_(std::move(tables)), names_(std::move(names)) {}

  int d_;
  std::vector<std::vector<double>> tables_;
  std::vector<std::string> names_;
};

class HistogramDataset {
 public:
  static absl::StatusOr<HistogramDataset> Create(
      std::vector<std::int64_t> counts);
  static absl::StatusOr<HistogramDataset> FromItems(
      const std::vector<std::uint64_t>& items, std::size_t universe_size);
  // n draws from a random Dirichlet(1) distribution over the universe.
  static HistogramDataset Random(std::size_t universe_size, std::int64_t n,
                                 RngStream& rng);

  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t n() const { return n_; }
  std::size_t universe_size() const { return counts_.size(); }
  std::vector<double> Distribution() const;

 private:
  HistogramDataset(std::vector<std::int64_t> counts, std::int64_t n)
      : counts_(std::move(counts)), n_(n) {}

  std::vector<std::int64_t> counts_;
  std::int64_t n_;
};

// (1/n) sum_i q_k(x_i) for each query.
absl::StatusOr<std::vector<double>> EvalQueries(const QueryWorkload& workload,
                                                const HistogramDataset& data);
// <q_k, p>.
absl::StatusOr<std::vector<double>> EvalQueries(const QueryWorkload& workload,
                                                const std::vector<double>& p);
// Average of q_k over a list of universe elements.
absl::StatusOr<std::vector<double>> EvalQueriesOnItems(
    const QueryWorkload& workload, const std::vector<std::uint64_t>& items);

double LinfDistance(const std::vector<double>& a, const std::vector<double>& b);

// P(i) proportional to exp(eps0 scores_i / (2 sensitivity)), in log space.
absl::StatusOr<std::size_t> ExponentialMechanism(
    const std::vector<double>& scores, double eps0, double sensitivity,
    RngStream& rng);

// log w(x) += q(x) (measurement - estimate) / 2.
void MultiplicativeWeightsUpdate(std::vector<double>& log_weights,
                                 const std::vector<double>& query,
                                 double measurement, double estimate);

// Softmax of log weights with max subtraction.
std::vector<double> NormalizeLogWeights(const std::vector<double>& log_weights);

struct MwemOptions {
  double noise_multiplier = 1.0;
  bool record_distributions = false;
};

struct MwemResult {
  // n times the average of p_1, ..., p_T.
  std::vector<double> synthetic;
  std::vector<std::size_t> selected;
  std::vector<double> measurements;
  // p_1, ..., p_T when recorded.
  std::vector<std::vector<double>> distributions;
  double eps0 = 0.0;
};

// rho-zCDP.
absl::StatusOr<MwemResult> Mwem(const HistogramDataset& data,
                                const QueryWorkload& workload, std::int64_t T,
                                double rho, RngStream& rng,
                                const MwemOptions& options = {});

// Packs m cells of d bits each, most significant first.
absl::StatusOr<std::vector<std::uint8_t>> EncodeTuple(
    const std::vector<std::uint64_t>& cells, int d);
absl::StatusOr<std::vector<std::uint64_t>> DecodeTuple(
    const std::vector<std::uint8_t>& bits, int d);

struct PureMwemOptions {
  std::int64_t t_cap = 500;
  double t_constant = 1.0;
  double m_constant = 1.0;
  std::int64_t bit_budget = 4096;
  std::optional<std::int64_t> t_override;
  std::optional<std::int64_t> m_override;
};

struct PureMwemPlan {
  std::int64_t T = 0;
  std::int64_t m = 0;
  std::int64_t bits = 0;
  // Just below eps^(md) / (2md)^(3md).
  LogProbability delta = LogProbability::FromValue(1.0);
  double rho = 0.0;
};

// T = ceil(c (n eps)^(2/3) d^(1/3)) capped, m = max(1, ceil(c (n eps / d)^(2/3))),
// rho = eps^2 / (16 log(1/delta)). Fails when md exceeds the bit budget.
absl::StatusOr<PureMwemPlan> MakePureMwemPlan(std::int64_t n, int d,
                                              double eps,
                                              const PureMwemOptions& options = {});

struct PureMwemResult {
  std::vector<std::uint64_t> items;
  std::vector<std::uint64_t> sampled;
  std::vector<double> synthetic;
  PureMwemPlan plan;
  bool mixed = false;
};

// 2 eps-pure DP.
absl::StatusOr<PureMwemResult> PureMwem(const HistogramDataset& data,
                                        const QueryWorkload& workload,
                                        double eps, RngStream& rng,
                                        const PureMwemOptions& options = {});

}  // namespace purify

#endif  // PURIFY_QUERIES_H_

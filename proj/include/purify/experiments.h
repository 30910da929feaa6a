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

#ifndef PURIFY_EXPERIMENTS_H_
#define PURIFY_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace purify {

// A JSON document:
//   {"experiment": "mode", "seed": 7, "trials": 1000,
//    "params": {"eps": 1.0}, "output": "mode.csv"}
// Everything except "experiment" is optional; params not given take their
// defaults.
struct ExperimentConfig {
  std::string experiment;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  nlohmann::json params = nlohmann::json::object();
  std::string output;
};

std::vector<std::string> ExperimentNames();
bool IsExperiment(const std::string& name);

// Malformed JSON or unknown top-level keys -> InvalidArgument. An unknown
// experiment name -> NotFound.
absl::StatusOr<ExperimentConfig> ParseConfig(const std::string& text);

// Fills defaults and type-checks params. The result is the canonical form
// written to CSV headers; the output path is not part of it.
absl::StatusOr<nlohmann::json> ResolveConfig(const ExperimentConfig& config);

// Violated preconditions, without running anything. Empty means runnable.
std::vector<std::string> Validate(const ExperimentConfig& config);

// FNV-1a over the compact dump of a resolved config.
std::uint64_t ConfigHash(const nlohmann::json& resolved);

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Requires a seed. Trials run in parallel, each on its own substream, and
// rows come back in trial order.
absl::StatusOr<Table> RunExperiment(const ExperimentConfig& config);

// '#' metadata lines, a header row, then rows; doubles as %.17g, LF endings.
// A non-finite value -> FailedPrecondition.
absl::StatusOr<std::string> RenderCsv(const nlohmann::json& resolved,
                                      const Table& table);

// run / validate / list. Returns the process exit code: 0 ok, 1 runtime
// failure, 2 usage.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace purify

#endif  // PURIFY_EXPERIMENTS_H_

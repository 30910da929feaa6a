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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "purify/experiments.h"

namespace purify {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Small configs so every experiment runs in well under a second.
json SmallConfig(const std::string& name) {
  static const std::map<std::string, json> small = {
      {"figure1", {{"params", {{"points", 5}}}}},
      {"tightness", {{"trials", 2000}, {"params", {{"dims", {1}}}}}},
      {"purify-demo", {{"trials", 20}}},
      {"erm-sgd", {{"trials", 2}, {"params", {{"n_values", {50}}, {"d", 2}}}}},
      {"erm-fw", {{"trials", 2}, {"params", {{"n_values", {100}}, {"d", 8}}}}},
      {"ptr", {{"trials", 20}, {"params", {{"n_values", {101}}}}}},
      {"local-sens", {{"trials", 20}, {"params", {{"n_values", {50}}}}}},
      {"mode", {{"trials", 50}}},
      {"adassp", {{"trials", 2}, {"params", {{"n_values", {100}}, {"d", 2}}}}},
      {"mwem",
       {{"trials", 2},
        {"params", {{"n", 200}, {"d", 3}, {"K", 4}, {"T_values", {2}}}}}},
      {"audit", {{"trials", 5000}}},
  };
  json c = small.at(name);
  c["experiment"] = name;
  return c;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("purify_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()
                                                    ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string WriteConfig(const std::string& file, const std::string& text) {
    const std::string path = (dir_ / file).string();
    std::ofstream(path) << text;
    return path;
  }

  int Cli(std::vector<std::string> args) {
    args.insert(args.begin(), "purify_cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return RunCli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::string Body(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, body;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] == '#') continue;
      body += line + "\n";
    }
    return body;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, ListNamesEveryExperiment) {
  EXPECT_EQ(Cli({"list"}), 0);
  for (const auto& name : ExperimentNames()) {
    EXPECT_NE(out_.str().find(name + "\t"), std::string::npos) << name;
  }
  EXPECT_EQ(ExperimentNames().size(), 11u);
}

TEST_F(CliTest, Figure1LaplaceVarianceIsTwo) {
  const std::string cfg = WriteConfig(
      "f.json", R"({"experiment": "figure1", "params": {"eps": 1,
                   "sensitivity": 1, "delta_min": 1e-10, "delta_max": 0.1}})");
  const std::string out = (dir_ / "f.csv").string();
  ASSERT_EQ(Cli({"run", "--config", cfg, "--seed", "3", "--out", out}), 0)
      << err_.str();
  std::istringstream in(Body(Slurp(out)));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "delta,laplace_var,gaussian_var");
  int rows = 0;
  double first_delta = 0, last_delta = 0;
  while (std::getline(in, line)) {
    double delta, lap, gauss;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &delta, &lap, &gauss), 3);
    EXPECT_EQ(lap, 2.0);
    if (delta <= 1e-3) EXPECT_GT(gauss, 2.0);
    if (rows == 0) first_delta = delta;
    last_delta = delta;
    ++rows;
  }
  EXPECT_EQ(rows, 37);
  EXPECT_EQ(first_delta, 1e-10);
  EXPECT_EQ(last_delta, 0.1);
}

TEST_F(CliTest, SameSeedGivesByteIdenticalCsvForEveryExperiment) {
  for (const auto& name : ExperimentNames()) {
    const std::string cfg = WriteConfig(name + ".json", SmallConfig(name).dump());
    const std::string a = (dir_ / (name + "_a.csv")).string();
    const std::string b = (dir_ / (name + "_b.csv")).string();
    ASSERT_EQ(Cli({"run", "--config", cfg, "--seed", "11", "--out", a}), 0)
        << name << ": " << err_.str();
    ASSERT_EQ(Cli({"run", "--config", cfg, "--seed", "11", "--out", b}), 0)
        << name << ": " << err_.str();
    const std::string ca = Slurp(a), cb = Slurp(b);
    EXPECT_FALSE(Body(ca).empty());
    EXPECT_EQ(ca, cb) << name;
  }
}

TEST_F(CliTest, SeedChangesRandomizedOutput) {
  for (const std::string name : {"ptr", "purify-demo", "audit", "mwem"}) {
    const std::string cfg = WriteConfig(name + ".json", SmallConfig(name).dump());
    const std::string a = (dir_ / "a.csv").string();
    const std::string b = (dir_ / "b.csv").string();
    ASSERT_EQ(Cli({"run", "--config", cfg, "--seed", "1", "--out", a}), 0);
    ASSERT_EQ(Cli({"run", "--config", cfg, "--seed", "2", "--out", b}), 0);
    EXPECT_NE(Body(Slurp(a)), Body(Slurp(b))) << name;
  }
}

TEST_F(CliTest, SeedFlagOverridesConfigSeed) {
  json c = SmallConfig("purify-demo");
  c["seed"] = 5;
  const std::string with_seed = WriteConfig("s.json", c.dump());
  const std::string plain =
      WriteConfig("p.json", SmallConfig("purify-demo").dump());
  const std::string a = (dir_ / "a.csv").string();
  const std::string b = (dir_ / "b.csv").string();
  ASSERT_EQ(Cli({"run", "--config", with_seed, "--seed", "9", "--out", a}), 0);
  ASSERT_EQ(Cli({"run", "--config", plain, "--seed", "9", "--out", b}), 0);
  EXPECT_EQ(Slurp(a), Slurp(b));
  ASSERT_EQ(Cli({"run", "--config", with_seed, "--out", a}), 0);
  EXPECT_NE(Slurp(a), Slurp(b));
}

TEST_F(CliTest, UnknownExperimentIsUsageErrorAndWritesNothing) {
  const std::string cfg =
      WriteConfig("u.json", R"({"experiment": "figure2", "seed": 1})");
  const std::string out = (dir_ / "u.csv").string();
  EXPECT_EQ(Cli({"run", "--config", cfg, "--seed", "1", "--out", out}), 2);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_NE(err_.str().find("figure2"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Cli({}), 2);
  EXPECT_EQ(Cli({"frobnicate"}), 2);
  EXPECT_EQ(Cli({"run"}), 2);
  const std::string cfg = WriteConfig("c.json", SmallConfig("mode").dump());
  const std::string out = (dir_ / "c.csv").string();
  // No seed anywhere.
  EXPECT_EQ(Cli({"run", "--config", cfg, "--out", out}), 2);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(Cli({"run", "--config", (dir_ / "missing.json").string(), "--seed",
                 "1"}),
            2);
  const std::string bad_json = WriteConfig("b.json", "{\"experiment\": ");
  EXPECT_EQ(Cli({"validate", "--config", bad_json}), 2);
}

TEST_F(CliTest, UnwritableOutputIsRuntimeError) {
  const std::string cfg = WriteConfig("c.json", SmallConfig("figure1").dump());
  EXPECT_EQ(Cli({"run", "--config", cfg, "--seed", "1", "--out",
                 (dir_ / "no_such_dir" / "x.csv").string()}),
            1);
}

TEST_F(CliTest, UnknownKeysAreRejected) {
  json top = SmallConfig("mode");
  top["sed"] = 1;
  EXPECT_EQ(ParseConfig(top.dump()).status().code(),
            absl::StatusCode::kInvalidArgument);
  json param = SmallConfig("mode");
  param["params"]["epsilon"] = 1.0;
  auto parsed = ParseConfig(param.dump());
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(ResolveConfig(*parsed).status().code(),
            absl::StatusCode::kInvalidArgument);
  const std::string cfg = WriteConfig("k.json", param.dump());
  const std::string out = (dir_ / "k.csv").string();
  EXPECT_EQ(Cli({"run", "--config", cfg, "--seed", "1", "--out", out}), 2);
  EXPECT_FALSE(fs::exists(out));
  json typed = SmallConfig("mode");
  typed["params"]["universe_size"] = 2.5;
  EXPECT_FALSE(ResolveConfig(*ParseConfig(typed.dump())).ok());
}

TEST_F(CliTest, ValidateDefaultsAreClean) {
  for (const auto& name : ExperimentNames()) {
    auto config = ParseConfig(json{{"experiment", name}}.dump());
    ASSERT_TRUE(config.ok());
    EXPECT_TRUE(Validate(*config).empty()) << name;
    const std::string cfg = WriteConfig(name + ".json", json{{"experiment", name}}.dump());
    EXPECT_EQ(Cli({"validate", "--config", cfg}), 0) << name;
    EXPECT_EQ(out_.str(), "");
  }
}

TEST_F(CliTest, ValidateNamesTheSgdConvergenceBound) {
  json c = {{"experiment", "erm-sgd"},
            {"params",
             {{"variant", "dpsgd"}, {"d", 1}, {"delta", 0.5}, {"eps", 1.0},
              {"n_values", {100}}}}};
  auto diags = Validate(*ParseConfig(c.dump()));
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_NE(diags[0].find("(d ^ 8) log(1/delta)"), std::string::npos) << diags[0];
  const std::string cfg = WriteConfig("v.json", c.dump());
  EXPECT_EQ(Cli({"validate", "--config", cfg}), 1);
  EXPECT_EQ(out_.str(), diags[0] + "\n");
  // Just inside the bound: ln 2 = 0.693.
  c["params"]["eps"] = 0.69;
  EXPECT_TRUE(Validate(*ParseConfig(c.dump())).empty());
  const std::string out = (dir_ / "v.csv").string();
  c["params"]["eps"] = 1.0;
  WriteConfig("v.json", c.dump());
  EXPECT_EQ(Cli({"run", "--config", cfg, "--seed", "1", "--out", out}), 2);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, ValidateFlagsMwemBitBudget) {
  json c = {{"experiment", "mwem"},
            {"params", {{"n", 100000}, {"d", 10}, {"bit_budget", 64}}}};
  auto diags = Validate(*ParseConfig(c.dump()));
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_NE(diags[0].find("bit budget"), std::string::npos) << diags[0];
}

TEST_F(CliTest, NonFiniteCellsFailTheRun) {
  auto resolved = *ResolveConfig(*ParseConfig(R"({"experiment": "figure1"})"));
  for (double bad : {std::nan(""), HUGE_VAL, -HUGE_VAL}) {
    Table t{{"x", "y"}, {{1.0, std::int64_t{2}}, {bad, std::int64_t{3}}}};
    EXPECT_EQ(RenderCsv(resolved, t).status().code(),
              absl::StatusCode::kFailedPrecondition);
  }
  Table ok{{"x", "s"}, {{0.1, std::string("a")}}};
  auto csv = RenderCsv(resolved, ok);
  ASSERT_TRUE(csv.ok());
  EXPECT_EQ(Body(*csv), "x,s\n0.10000000000000001,a\n");
}

TEST_F(CliTest, HeaderHashIsInjectiveOverMutatedConfigs) {
  std::set<std::uint64_t> hashes;
  std::set<std::string> headers;
  std::size_t configs = 0;
  auto add = [&](const json& resolved) {
    ++configs;
    hashes.insert(ConfigHash(resolved));
    auto csv = RenderCsv(resolved, Table{{"x"}, {}});
    ASSERT_TRUE(csv.ok());
    headers.insert(csv->substr(0, csv->find("\nx\n")));
  };
  for (const auto& name : ExperimentNames()) {
    json base = *ResolveConfig(*ParseConfig(json{{"experiment", name}}.dump()));
    base["seed"] = 1;
    add(base);
    json seed = base;
    seed["seed"] = 2;
    add(seed);
    json trials = base;
    trials["trials"] = trials["trials"].get<std::int64_t>() + 1;
    add(trials);
    for (const auto& [key, value] : base["params"].items()) {
      json m = base;
      json& v = m["params"][key];
      if (v.is_number_float()) {
        v = std::nextafter(v.get<double>(), 1e300);
      } else if (v.is_number_integer()) {
        v = v.get<std::int64_t>() + 1;
      } else if (v.is_string()) {
        v = v.get<std::string>() + "x";
      } else if (v.is_boolean()) {
        v = !v.get<bool>();
      } else if (v.is_array()) {
        v.push_back(v.empty() ? json(1) : v.back());
      }
      add(m);
    }
  }
  EXPECT_EQ(hashes.size(), configs);
  EXPECT_EQ(headers.size(), configs);
}

// The plotting component reads only this dialect.
TEST_F(CliTest, CsvDialectContract) {
  for (const auto& name : ExperimentNames()) {
    const std::string cfg = WriteConfig(name + ".json", SmallConfig(name).dump());
    const std::string out = (dir_ / (name + ".csv")).string();
    ASSERT_EQ(Cli({"run", "--config", cfg, "--seed", "4", "--out", out}), 0);
    const std::string csv = Slurp(out);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    ASSERT_FALSE(csv.empty());
    EXPECT_EQ(csv.back(), '\n');
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("# purify experiment=" + name + " config_hash=", 0), 0u);
    std::getline(in, line);
    ASSERT_EQ(line.rfind("# config=", 0), 0u);
    const json embedded = json::parse(line.substr(9));
    EXPECT_EQ(embedded["experiment"], name);
    EXPECT_EQ(embedded["seed"], 4);
    std::getline(in, line);
    const auto columns = std::count(line.begin(), line.end(), ',') + 1;
    while (std::getline(in, line)) {
      EXPECT_EQ(std::count(line.begin(), line.end(), ',') + 1, columns);
      std::istringstream cells(line);
      std::string cell;
      while (std::getline(cells, cell, ',')) {
        ASSERT_FALSE(cell.empty());
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (*end == '\0') {
          EXPECT_TRUE(std::isfinite(v)) << name << ": " << cell;
        } else {
          EXPECT_TRUE(std::isalpha(static_cast<unsigned char>(cell[0])))
              << name << ": " << cell;
        }
      }
    }
  }
}

TEST_F(CliTest, ColumnsMatchThePlotInterface) {
  auto columns = [](const std::string& name) {
    auto config = *ParseConfig(SmallConfig(name).dump());
    config.seed = 1;
    return RunExperiment(config)->columns;
  };
  using V = std::vector<std::string>;
  EXPECT_EQ(columns("figure1"), (V{"delta", "laplace_var", "gaussian_var"}));
  EXPECT_EQ(columns("erm-sgd"),
            (V{"n", "d", "eps", "excess_risk", "displacement"}));
  EXPECT_EQ(columns("erm-fw"), (V{"n", "d", "eps", "T", "k", "excess_risk",
                                  "recovery_error"}));
  for (const std::string name : {"ptr", "local-sens", "mode", "adassp"}) {
    EXPECT_EQ(columns(name), (V{"mechanism", "n", "d", "eps", "error_metric",
                                "aborted_flag"}));
  }
  EXPECT_EQ(columns("mwem"),
            (V{"n", "d", "K", "T", "m", "eps", "linf_error", "stage"}));
}

}  // namespace
}  // namespace purify

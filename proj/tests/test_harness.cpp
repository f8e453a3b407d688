// Copyright 2026 The qdpt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qdpt/harness.hpp"

using namespace qdpt;
using nlohmann::json;

namespace {

ExperimentConfig quick_config() {
  ExperimentConfig cfg;
  cfg.tester = "entropy_classical";
  cfg.instance = "uniform:n=16";
  cfg.eps = 0.25;
  cfg.trials = 6;
  cfg.seed = 42;
  return cfg;
}

// Minimal JSON-schema conformance: the subset used by the shipped schema
// (required keys, primitive types, nested objects).
bool conforms(const json& value, const json& schema) {
  std::string type = schema.value("type", "");
  if (type == "object") {
    if (!value.is_object()) return false;
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!value.contains(key.get<std::string>())) return false;
      }
    }
    if (schema.contains("properties")) {
      for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
        if (value.contains(it.key()) && !conforms(value[it.key()], it.value())) return false;
      }
    }
    return true;
  }
  if (type == "string") return value.is_string();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  return true;
}

#ifdef QDPT_CLI_PATH
int run_cli(const std::string& args, std::string* out = nullptr) {
  std::string cmd = std::string(QDPT_CLI_PATH) + " " + args;
  std::string redirect = " 2>/dev/null";
  FILE* pipe = popen((cmd + redirect).c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) text.append(buf, got);
  int status = pclose(pipe);
  if (out) *out = text;
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
#endif

}  // namespace

TEST_CASE("config parsing and overrides") {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(
      R"({"tester":"l2_classical","instance":"pair-equal:n=8,seed=1","eps":0.3,"nu":0.4,)"
      R"("trials":7,"seed":11,"mode":"exact"})");
  CHECK(cfg.tester == "l2_classical");
  CHECK(cfg.eps == 0.3);
  CHECK(cfg.mode == Mode::kExact);
  cfg.set_key("eps", "0.2");
  cfg.set_key("mode", "semantic");
  CHECK(cfg.eps == 0.2);
  CHECK(cfg.mode == Mode::kSemantic);
  CHECK_THROWS_AS(cfg.set_key("bogus", "1"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{nope"), ConfigError);
}

TEST_CASE("instances carry ground truth and promise classification") {
  Instance ent = build_instance("entropy_classical", "uniform:n=16", 0.25, 0.5);
  CHECK(ent.truth == doctest::Approx(std::log(16.0)));
  CHECK_FALSE(ent.is_decision);

  Instance far = build_instance("l2_classical", "pair-l2:n=8,dist=0.3,seed=2", 0.3, 0.5);
  CHECK(far.is_decision);
  CHECK(far.truth_far);
  CHECK_FALSE(far.in_gap);

  Instance gap = build_instance("l2_classical", "pair-l2:n=8,dist=0.25,seed=2", 0.3, 0.5);
  CHECK_FALSE(gap.truth_far);
  CHECK(gap.in_gap);  // 0.25 is between (1-nu) eps = 0.15 and eps = 0.3

  Instance ind = build_instance("independence", "correlated:n=2", 0.5, 0.5);
  CHECK(ind.truth == doctest::Approx(1.0));
  CHECK(ind.truth_far);

  CHECK_THROWS_AS(build_instance("entropy_classical", "nope:n=4", 0.25, 0.5), ConfigError);
  CHECK_THROWS_AS(build_instance("bogus_tester", "uniform:n=4", 0.25, 0.5), ConfigError);
  CHECK_THROWS_AS(build_instance("l3", "uniform:n=4", 0.25, 0.5), ConfigError);

  // Distribution files round trip through the instance loader.
  namespace fs = std::filesystem;
  fs::path tmp = fs::temp_directory_path() / "qdpt_inst.json";
  {
    std::ofstream out(tmp);
    out << R"({"type":"classical","probs":[0.25,0.25,0.25,0.25]})";
  }
  Instance from_file = build_instance("entropy_classical", "file:" + tmp.string(), 0.25, 0.5);
  CHECK(from_file.truth == doctest::Approx(std::log(4.0)));
  fs::remove(tmp);
}

TEST_CASE("run_experiment is deterministic byte for byte") {
  ExperimentConfig cfg = quick_config();
  RunResult r1 = run_experiment(cfg);
  RunResult r2 = run_experiment(cfg);
  CHECK(rows_to_csv(r1.rows) == rows_to_csv(r2.rows));
  CHECK(summary_to_json(cfg, r1) == summary_to_json(cfg, r2));

  cfg.threads = 4;
  RunResult r4 = run_experiment(cfg);
  CHECK(rows_to_csv(r4.rows) == rows_to_csv(r1.rows));

  ExperimentConfig other = quick_config();
  other.seed = 43;
  RunResult r3 = run_experiment(other);
  CHECK(rows_to_csv(r3.rows) != rows_to_csv(r1.rows));
}

TEST_CASE("csv and summary formats") {
  ExperimentConfig cfg = quick_config();
  RunResult rr = run_experiment(cfg);
  std::string csv = rows_to_csv(rr.rows);
  CHECK(csv.rfind("# schema: qdpt-rows-v1\n", 0) == 0);
  CHECK(csv.find("trial,seed,verdict,estimate,truth,error,success,queries,trace") !=
        std::string::npos);
  CHECK(csv.find("svt=") != std::string::npos);

  json summary = json::parse(summary_to_json(cfg, rr));
  std::ifstream schema_file(std::string(QDPT_SCHEMA_DIR) + "/summary.schema.json");
  REQUIRE(schema_file.good());
  json schema = json::parse(schema_file);
  CHECK(conforms(summary, schema));
  CHECK(summary["schema"] == "qdpt-summary-v1");
  CHECK(summary["queries"]["median"].get<std::uint64_t>() > 0);
}

TEST_CASE("config validation errors") {
  ExperimentConfig cfg = quick_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = quick_config();
  cfg.eps = 1.5;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = quick_config();
  cfg.instance = "uniform:n=64";
  cfg.mode = Mode::kMatrix;  // beyond the documented classical matrix cap
  CHECK_THROWS_AS(run_experiment(cfg), InvariantError);
  CHECK_THROWS_AS(
      scaling_sweep("entropy_classical", "n", {16.0, 32.0}, 0.25, 0.5, 0, 1, 1, Mode::kSemantic),
      ConfigError);
  CHECK_THROWS_AS(
      scaling_sweep("entropy_classical", "m", {16.0, 32.0, 64.0}, 0.25, 0.5, 0, 1, 1,
                    Mode::kSemantic),
      ConfigError);
}

TEST_CASE("wilson lower bound") {
  CHECK(wilson_lower_bound(0, 0) == 0.0);
  CHECK(wilson_lower_bound(100, 100) > 0.96);
  // 81/100 successes: lower bound near 0.72.
  double lb = wilson_lower_bound(81, 100);
  CHECK(lb > 0.71);
  CHECK(lb < 0.74);
  CHECK(wilson_lower_bound(67, 100) > 0.55);
}

TEST_CASE("scaling sweep mechanism") {
  SweepResult res = scaling_sweep("entropy_classical", "n", {16.0, 32.0, 64.0}, 0.25, 0.5, 0, 2,
                                  1, Mode::kSemantic);
  REQUIRE(res.points.size() == 3);
  CHECK(res.points[0].median_queries < res.points[2].median_queries);
  CHECK(res.slope > 0.0);
  std::string csv = sweep_to_csv(res);
  CHECK(csv.rfind("# schema: qdpt-sweep-v1\n", 0) == 0);
  json js = json::parse(sweep_to_json(res));
  CHECK(js["points"].size() == 3);
}

#ifdef QDPT_CLI_PATH

TEST_CASE("cli end to end") {
  namespace fs = std::filesystem;
  fs::path tmp = fs::temp_directory_path() / "qdpt_cli_test";
  fs::remove_all(tmp);

  SUBCASE("entropy run writes deterministic outputs and exits 0") {
    std::string out1, out2;
    std::string args = "entropy --kind classical --instance uniform:n=16 --eps 0.25 --trials 4 "
                       "--seed 9 --out " +
                       (tmp / "a").string();
    CHECK(run_cli(args, &out1) == 0);
    CHECK(run_cli("entropy --kind classical --instance uniform:n=16 --eps 0.25 --trials 4 "
                  "--seed 9 --out " +
                      (tmp / "b").string(),
                  &out2) == 0);
    CHECK(out1 == out2);
    CHECK(slurp(tmp / "a" / "rows.csv") == slurp(tmp / "b" / "rows.csv"));
    CHECK(slurp(tmp / "a" / "summary.json") == slurp(tmp / "b" / "summary.json"));
    CHECK(!slurp(tmp / "a" / "rows.csv").empty());
  }
  SUBCASE("config file plus --set override") {
    fs::create_directories(tmp);
    std::ofstream cfg(tmp / "cfg.json");
    cfg << R"({"tester":"entropy_classical","instance":"uniform:n=16","eps":0.25,)"
        << R"("trials":2,"seed":5})";
    cfg.close();
    std::string out;
    CHECK(run_cli("entropy --config " + (tmp / "cfg.json").string() + " --set trials=3", &out) ==
          0);
    json j = json::parse(out);
    CHECK(j["trials"] == 3);
  }
  SUBCASE("exit code 2 on config errors") {
    CHECK(run_cli("entropy --kind classical --instance bogus:n=4 --trials 1") == 2);
    CHECK(run_cli("entropy --kind sideways --instance uniform:n=16") == 2);
    CHECK(run_cli("sweep --tester entropy_classical --grid 16,32") == 2);
    CHECK(run_cli("--no-such-flag") == 2);
  }
  SUBCASE("exit code 3 on invariant failures") {
    // Matrix mode beyond its documented cap.
    CHECK(run_cli("entropy --kind classical --instance uniform:n=64 --mode matrix --trials 1") ==
          3);
  }
  SUBCASE("poly subcommand dumps JSON") {
    std::string out;
    CHECK(run_cli("poly --which S --beta 0.25 --eta 0.1", &out) == 0);
    json j = json::parse(out);
    CHECK(j["target"] == "S");
    CHECK(j["degree"].get<int>() > 0);
  }
  SUBCASE("l2test and independence run end to end") {
    std::string out;
    CHECK(run_cli("l2test --family classical --instance pair-equal:n=8,seed=3 --eps 0.3 --nu 0.5 "
                  "--trials 2 --seed 4",
                  &out) == 0);
    json j = json::parse(out);
    CHECK(j["counted_trials"] == 2);
    CHECK(run_cli("independence --instance correlated:n=2 --eps 0.5 --trials 2 --seed 4", &out) ==
          0);
  }
  fs::remove_all(tmp);
}

#endif  // QDPT_CLI_PATH

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

#ifndef QDPT_HARNESS_HPP_
#define QDPT_HARNESS_HPP_

#include <optional>
#include <string>

#include "qdpt/generate.hpp"
#include "qdpt/oracle.hpp"
#include "qdpt/testers.hpp"

namespace qdpt {

/// Configuration errors exit the CLI with status 2 (invariant and
/// certification failures exit with 3).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Experiment description; parsed from a JSON config file and/or CLI flags,
/// overridable with --set key=value. (config, seed) determines every output
/// byte; all timing stays on stderr.
struct ExperimentConfig {
  std::string tester;    // entropy_classical, entropy_quantum, l2_classical,
                         // l2_quantum, l3, l1_classical, l1_quantum, independence
  std::string instance;  // generator spec, see parse_instance_spec
  double eps = 0.25;
  double nu = 0.5;
  int trials = 1;
  std::uint64_t seed = 0;
  Mode mode = Mode::kSemantic;
  std::string route = "auto";  // l2_quantum route: auto | entangled | swap
  std::string out;             // output directory
  int threads = 1;
  int boost = 1;               // entropy estimators: median of `boost` runs
  bool bits = false;           // display entropy summaries in bits (stderr)

  static ExperimentConfig from_json_text(const std::string& text);
  void set_key(const std::string& key, const std::string& value);
};

/// Concrete problem instance with its ground truth.
struct Instance {
  std::optional<ClassicalDistribution> p, q;
  std::optional<DensityOperator> rho, sigma;
  Index ind_n = 0, ind_m = 0;  // independence factorization
  double truth = 0.0;          // entropy or distance
  // Decision testers: whether the instance satisfies the far / close
  // promise (instances inside the robustness gap are excluded from success
  // accounting).
  bool is_decision = false;
  bool truth_far = false;
  bool in_gap = false;
};

/// Builds the instance for a tester from a generator spec like
/// "uniform:n=32", "zipf:n=32,s=1.1", "dirichlet:n=32,seed=5",
/// "two-point:delta=0.1", "haar:n=8,rank=8,seed=5", "pure:n=8,seed=3",
/// "file:PATH", "pair-equal:n=16,seed=1", "pair-l2:n=16,dist=0.2,seed=1",
/// "pair-equal-q:n=8,seed=1", "pair-l2q:n=8,dist=0.2,seed=1",
/// "product:n=2,m=2,seed=1", "correlated:n=2".
Instance build_instance(const std::string& tester, const std::string& spec, double eps,
                        double nu);

struct ResultRow {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string verdict;  // "far" / "close" / "estimate"
  double estimate = 0.0;
  double truth = 0.0;
  double error = 0.0;
  int success = -1;  // 1/0, -1 when not applicable (promise gap)
  std::uint64_t queries = 0;
  std::string trace;   // "stage=queries;..."
  double wall_ms = 0;  // in-memory only; never written to output files
};

struct RunResult {
  std::vector<ResultRow> rows;
  int counted = 0;
  int successes = 0;
  double success_rate = 0.0;
  double wilson_lower95 = 0.0;
  std::vector<std::uint64_t> queries_sorted;
  double total_wall_ms = 0.0;
};

/// Runs `trials` seeded trials (dispatched to a worker pool, results in
/// trial order) and aggregates.
RunResult run_experiment(const ExperimentConfig& config);

/// Versioned CSV of the result rows.
std::string rows_to_csv(const std::vector<ResultRow>& rows);
/// Summary JSON (validates against schemas/summary.schema.json).
std::string summary_to_json(const ExperimentConfig& config, const RunResult& result);

/// Writes rows.csv and summary.json under config.out (created if needed);
/// returns the summary JSON text.
std::string write_outputs(const ExperimentConfig& config, const RunResult& result);

double wilson_lower_bound(int successes, int n, double z = 1.959963984540054);

struct SweepPoint {
  double x = 0.0;
  std::uint64_t median_queries = 0;
};
struct SweepResult {
  std::string variable;  // "n" or "eps"
  std::vector<SweepPoint> points;
  double slope = 0.0;  // least-squares d ln(queries) / d ln(x)
};

/// Median query count of `tester` across a grid of n (or eps) values,
/// with a least-squares log-log slope. Requires >= 3 grid points.
SweepResult scaling_sweep(const std::string& tester, const std::string& variable,
                          const std::vector<double>& values, double eps, double nu, Index fixed_n,
                          int trials, std::uint64_t seed, Mode mode);

std::string sweep_to_csv(const SweepResult& s);
std::string sweep_to_json(const SweepResult& s);

/// Runs one seeded trial of a tester on an instance; used by run_experiment
/// and directly by tests.
ResultRow run_trial(const std::string& tester, const Instance& inst, double eps, double nu,
                    Mode mode, const std::string& route, std::uint64_t trial_seed,
                    int trial_index, int boost = 1);

}  // namespace qdpt

#endif  // QDPT_HARNESS_HPP_

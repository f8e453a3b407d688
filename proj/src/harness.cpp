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

#include "qdpt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "qdpt/io.hpp"

namespace qdpt {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    size_t eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("bad instance parameter: " + item);
    out[item.substr(0, eq)] = item.substr(eq + 1);
    pos = comma + 1;
  }
  return out;
}

double kv_num(const std::map<std::string, std::string>& kv, const std::string& key,
              std::optional<double> fallback = std::nullopt) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    if (fallback) return *fallback;
    throw ConfigError("missing instance parameter: " + key);
  }
  try {
    return std::stod(it->second);
  } catch (...) {
    throw ConfigError("bad numeric value for " + key + ": " + it->second);
  }
}

std::uint64_t kv_seed(const std::map<std::string, std::string>& kv, std::uint64_t fallback = 1) {
  auto it = kv.find("seed");
  if (it == kv.end()) return fallback;
  return static_cast<std::uint64_t>(std::stoull(it->second));
}

double l1_distance(const RealVector& a, const RealVector& b) { return (a - b).cwiseAbs().sum(); }

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  auto get_str = [&](const char* key, std::string& into) {
    if (j.contains(key)) into = j[key].get<std::string>();
  };
  get_str("tester", c.tester);
  get_str("instance", c.instance);
  get_str("route", c.route);
  get_str("out", c.out);
  if (j.contains("eps")) c.eps = j["eps"].get<double>();
  if (j.contains("nu")) c.nu = j["nu"].get<double>();
  if (j.contains("trials")) c.trials = j["trials"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  if (j.contains("mode")) c.mode = mode_from_string(j["mode"].get<std::string>());
  if (j.contains("boost")) c.boost = j["boost"].get<int>();
  if (j.contains("bits")) c.bits = j["bits"].get<bool>();
  return c;
}

void ExperimentConfig::set_key(const std::string& key, const std::string& value) {
  if (key == "tester") tester = value;
  else if (key == "instance") instance = value;
  else if (key == "route") route = value;
  else if (key == "out") out = value;
  else if (key == "eps") eps = std::stod(value);
  else if (key == "nu") nu = std::stod(value);
  else if (key == "trials") trials = std::stoi(value);
  else if (key == "seed") seed = std::stoull(value);
  else if (key == "threads") threads = std::stoi(value);
  else if (key == "mode") mode = mode_from_string(value);
  else if (key == "boost") boost = std::stoi(value);
  else if (key == "bits") bits = (value == "true" || value == "1");
  else throw ConfigError("unknown config key: " + key);
}

Instance build_instance(const std::string& tester, const std::string& spec, double eps,
                        double nu) {
  size_t colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    if (kind == "file") {
      kv["path"] = spec.substr(colon + 1);
    } else {
      kv = parse_kv(spec.substr(colon + 1));
    }
  }

  Instance inst;
  auto n_of = [&](const char* key = "n") { return static_cast<Index>(kv_num(kv, key)); };

  if (kind == "uniform") {
    inst.p = uniform_distribution(n_of());
  } else if (kind == "zipf") {
    inst.p = zipf_distribution(n_of(), kv_num(kv, "s", 1.0));
  } else if (kind == "dirichlet") {
    inst.p = dirichlet_random(n_of(), kv_seed(kv));
  } else if (kind == "two-point") {
    inst.p = two_point(kv_num(kv, "delta"));
  } else if (kind == "deterministic") {
    RealVector v = RealVector::Zero(n_of());
    v[0] = 1.0;
    inst.p = ClassicalDistribution(v);
  } else if (kind == "haar") {
    Index n = n_of();
    Index rank = static_cast<Index>(kv_num(kv, "rank", static_cast<double>(n)));
    inst.rho = haar_random_density(n, rank, kv_seed(kv));
  } else if (kind == "pure") {
    inst.rho = random_pure_density(n_of(), kv_seed(kv));
  } else if (kind == "maximally-mixed") {
    Index n = n_of();
    inst.rho = DensityOperator(Matrix::Identity(n, n) / static_cast<double>(n));
  } else if (kind == "file") {
    DistributionInput in = load_distribution_file(kv["path"]);
    if (std::holds_alternative<ClassicalDistribution>(in)) {
      inst.p = std::get<ClassicalDistribution>(in);
    } else {
      inst.rho = std::get<DensityOperator>(in);
    }
  } else if (kind == "pair-equal") {
    ClassicalDistribution d = dirichlet_random(n_of(), kv_seed(kv));
    inst.p = d;
    inst.q = d;
  } else if (kind == "pair-l2") {
    auto [pp, qq] = l2_separated_pair(n_of(), kv_num(kv, "dist", eps), kv_seed(kv));
    inst.p = pp;
    inst.q = qq;
  } else if (kind == "pair-equal-q") {
    DensityOperator rho = haar_random_density(n_of(), n_of(), kv_seed(kv));
    inst.rho = rho;
    inst.sigma = rho;
  } else if (kind == "pair-l2q") {
    auto [r, s] = l2_separated_density_pair(n_of(), kv_num(kv, "dist", eps), kv_seed(kv));
    inst.rho = r;
    inst.sigma = s;
  } else if (kind == "pair-orthogonal-q") {
    Index n = n_of();
    Matrix r = Matrix::Zero(n, n), s = Matrix::Zero(n, n);
    r(0, 0) = 1.0;
    s(1, 1) = 1.0;
    inst.rho = DensityOperator(r);
    inst.sigma = DensityOperator(s);
  } else if (kind == "product") {
    inst.ind_n = n_of("n");
    inst.ind_m = n_of("m");
    inst.p = product_instance(inst.ind_n, inst.ind_m, kv_seed(kv));
  } else if (kind == "correlated") {
    inst.ind_n = n_of("n");
    inst.ind_m = inst.ind_n;
    inst.p = correlated_diagonal(inst.ind_n);
  } else {
    throw ConfigError("unknown instance kind: " + kind);
  }

  // Ground truth per tester.
  if (tester == "entropy_classical") {
    if (!inst.p) throw ConfigError("entropy_classical needs a classical instance");
    inst.truth = shannon_entropy(*inst.p);
  } else if (tester == "entropy_quantum") {
    if (inst.rho) {
      inst.truth = von_neumann_entropy(*inst.rho);
    } else if (inst.p) {
      inst.truth = shannon_entropy(*inst.p);
    } else {
      throw ConfigError("entropy_quantum needs an instance");
    }
  } else if (tester == "l2_classical" || tester == "l1_classical") {
    if (!inst.p || !inst.q) throw ConfigError(tester + " needs a classical pair instance");
    inst.is_decision = true;
    double dist = (tester == "l2_classical") ? (inst.p->probs() - inst.q->probs()).norm()
                                             : l1_distance(inst.p->probs(), inst.q->probs());
    inst.truth = dist;
    // Instances are often generated exactly on the boundary; classify with a
    // hair of tolerance so roundoff cannot flip the promise class.
    inst.truth_far = dist >= eps * (1.0 - 1e-9);
    bool close = (tester == "l2_classical") ? (dist <= (1.0 - nu) * eps) : (dist <= 1e-14);
    inst.in_gap = !inst.truth_far && !close;
  } else if (tester == "l2_quantum" || tester == "l1_quantum" || tester == "l3") {
    if (!inst.rho || !inst.sigma) throw ConfigError(tester + " needs a density pair instance");
    double alpha = (tester == "l3") ? 3.0 : (tester == "l2_quantum" ? 2.0 : 1.0);
    double dist = schatten_distance(*inst.rho, *inst.sigma, alpha);
    inst.is_decision = true;
    inst.truth = dist;
    inst.truth_far = dist >= eps * (1.0 - 1e-9);
    bool close = (tester == "l2_quantum") ? (dist <= (1.0 - nu) * eps) : (dist <= 1e-12);
    inst.in_gap = !inst.truth_far && !close;
  } else if (tester == "independence") {
    if (!inst.p || inst.ind_n == 0) {
      throw ConfigError("independence needs a product/correlated instance with n, m");
    }
    ClassicalDistribution prod = product_of_marginals(*inst.p, inst.ind_n, inst.ind_m);
    double dist = l1_distance(inst.p->probs(), prod.probs());
    inst.is_decision = true;
    inst.truth = dist;
    inst.truth_far = dist >= eps * (1.0 - 1e-9);
    inst.in_gap = !inst.truth_far && dist > 1e-12;
  } else {
    throw ConfigError("unknown tester: " + tester);
  }
  return inst;
}

ResultRow run_trial(const std::string& tester, const Instance& inst, double eps, double nu,
                    Mode mode, const std::string& route, std::uint64_t trial_seed,
                    int trial_index, int boost) {
  ResultRow row;
  row.trial = trial_index;
  row.seed = trial_seed;
  row.truth = inst.truth;

  auto t0 = std::chrono::steady_clock::now();
  TesterVerdict v;
  if (tester == "entropy_classical") {
    PurifiedOracle o = PurifiedOracle::purify_classical(*inst.p);
    v = entropy_classical(o, eps, trial_seed, mode, boost);
  } else if (tester == "entropy_quantum") {
    PurifiedOracle o = inst.rho ? PurifiedOracle::purify_density(*inst.rho)
                                : PurifiedOracle::purify_classical(*inst.p);
    v = entropy_quantum(o, eps, trial_seed, mode, boost);
  } else if (tester == "l2_classical") {
    PurifiedOracle op = PurifiedOracle::purify_classical(*inst.p);
    PurifiedOracle oq = PurifiedOracle::purify_classical(*inst.q);
    v = l2_classical_robust(op, oq, eps, nu, trial_seed, mode);
  } else if (tester == "l1_classical") {
    PurifiedOracle op = PurifiedOracle::purify_classical(*inst.p);
    PurifiedOracle oq = PurifiedOracle::purify_classical(*inst.q);
    v = l1_closeness(op, oq, eps, trial_seed, mode);
  } else if (tester == "l2_quantum" || tester == "l1_quantum" || tester == "l3") {
    PurifiedOracle orho = PurifiedOracle::purify_density(*inst.rho);
    PurifiedOracle osig = PurifiedOracle::purify_density(*inst.sigma);
    if (tester == "l3") {
      v = l3_closeness(orho, osig, eps, trial_seed, mode);
    } else if (tester == "l1_quantum") {
      v = l1_closeness(orho, osig, eps, trial_seed, mode);
    } else {
      L2QuantumRoute r = L2QuantumRoute::kAuto;
      if (route == "entangled") r = L2QuantumRoute::kEntangled;
      else if (route == "swap") r = L2QuantumRoute::kSwap;
      else if (route != "auto" && !route.empty()) throw ConfigError("unknown route: " + route);
      v = l2_quantum(orho, osig, eps, nu, trial_seed, mode, r);
    }
  } else if (tester == "independence") {
    PurifiedOracle op = PurifiedOracle::purify_classical(*inst.p);
    v = independence(op, inst.ind_n, inst.ind_m, eps, trial_seed, mode);
  } else {
    throw ConfigError("unknown tester: " + tester);
  }
  row.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  row.queries = v.queries;
  std::string trace;
  for (const StageTrace& st : v.trace) {
    if (!trace.empty()) trace += ";";
    trace += st.stage + "=" + std::to_string(st.queries);
  }
  row.trace = trace;

  if (inst.is_decision) {
    bool far = v.far.value_or(false);
    row.verdict = far ? "far" : "close";
    row.estimate = v.estimate.value_or(0.0);
    row.error = 0.0;
    row.success = inst.in_gap ? -1 : (far == inst.truth_far ? 1 : 0);
  } else {
    row.verdict = "estimate";
    row.estimate = v.estimate.value_or(0.0);
    row.error = std::abs(row.estimate - inst.truth);
    row.success = (row.error <= eps) ? 1 : 0;
  }
  return row;
}

RunResult run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw ConfigError("trials must be >= 1");
  if (!(config.eps > 0.0 && config.eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
  Instance inst = build_instance(config.tester, config.instance, config.eps, config.nu);

  RunResult result;
  result.rows.resize(config.trials);
  int threads = std::max(1, config.threads);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= config.trials) return;
      std::uint64_t trial_seed = Rng::substream(config.seed, static_cast<std::uint64_t>(i)).next_u64();
      result.rows[i] = run_trial(config.tester, inst, config.eps, config.nu, config.mode,
                                 config.route, trial_seed, i, config.boost);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const ResultRow& row : result.rows) {
    result.total_wall_ms += row.wall_ms;
    result.queries_sorted.push_back(row.queries);
    if (row.success >= 0) {
      ++result.counted;
      result.successes += row.success;
    }
  }
  std::sort(result.queries_sorted.begin(), result.queries_sorted.end());
  result.success_rate =
      result.counted > 0 ? static_cast<double>(result.successes) / result.counted : 0.0;
  result.wilson_lower95 = wilson_lower_bound(result.successes, result.counted);
  return result;
}

double wilson_lower_bound(int successes, int n, double z) {
  if (n <= 0) return 0.0;
  double phat = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = phat + z2 / (2.0 * n);
  double rad = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return std::max(0.0, (center - rad) / denom);
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = "# schema: qdpt-rows-v1\n";
  out += "trial,seed,verdict,estimate,truth,error,success,queries,trace\n";
  for (const ResultRow& r : rows) {
    out += std::to_string(r.trial) + "," + std::to_string(r.seed) + "," + r.verdict + "," +
           fmt(r.estimate) + "," + fmt(r.truth) + "," + fmt(r.error) + "," +
           (r.success < 0 ? "na" : std::to_string(r.success)) + "," + std::to_string(r.queries) +
           "," + r.trace + "\n";
  }
  return out;
}

std::string summary_to_json(const ExperimentConfig& config, const RunResult& result) {
  json j;
  j["schema"] = "qdpt-summary-v1";
  j["tester"] = config.tester;
  j["instance"] = config.instance;
  j["eps"] = config.eps;
  j["nu"] = config.nu;
  j["mode"] = mode_to_string(config.mode);
  j["trials"] = config.trials;
  j["seed"] = config.seed;
  j["counted_trials"] = result.counted;
  j["successes"] = result.successes;
  j["success_rate"] = result.success_rate;
  j["wilson_lower_95"] = result.wilson_lower95;
  const auto& q = result.queries_sorted;
  auto pct = [&](double f) -> std::uint64_t {
    if (q.empty()) return 0;
    size_t idx = static_cast<size_t>(f * (q.size() - 1));
    return q[idx];
  };
  j["queries"] = {{"min", q.empty() ? 0 : q.front()},
                  {"p25", pct(0.25)},
                  {"median", pct(0.5)},
                  {"p75", pct(0.75)},
                  {"max", q.empty() ? 0 : q.back()}};
  double mean_err = 0.0, max_err = 0.0;
  for (const ResultRow& r : result.rows) {
    mean_err += r.error;
    max_err = std::max(max_err, r.error);
  }
  if (!result.rows.empty()) mean_err /= result.rows.size();
  j["error"] = {{"mean", mean_err}, {"max", max_err}};
  return j.dump(2) + "\n";
}

std::string write_outputs(const ExperimentConfig& config, const RunResult& result) {
  if (config.out.empty()) throw ConfigError("no output path configured");
  std::filesystem::create_directories(config.out);
  std::string csv = rows_to_csv(result.rows);
  std::string summary = summary_to_json(config, result);
  std::ofstream rows_file(std::filesystem::path(config.out) / "rows.csv", std::ios::binary);
  rows_file << csv;
  std::ofstream summary_file(std::filesystem::path(config.out) / "summary.json",
                             std::ios::binary);
  summary_file << summary;
  return summary;
}

SweepResult scaling_sweep(const std::string& tester, const std::string& variable,
                          const std::vector<double>& values, double eps, double nu, Index fixed_n,
                          int trials, std::uint64_t seed, Mode mode) {
  if (values.size() < 3) throw ConfigError("sweep grid needs at least 3 points");
  if (variable != "n" && variable != "eps") throw ConfigError("sweep variable must be n or eps");
  SweepResult out;
  out.variable = variable;
  for (size_t vi = 0; vi < values.size(); ++vi) {
    double value = values[vi];
    Index n = (variable == "n") ? static_cast<Index>(value) : fixed_n;
    double e = (variable == "eps") ? value : eps;
    std::uint64_t inst_seed = Rng::substream(seed, 777 + vi).next_u64() % 100000 + 1;

    std::string spec;
    if (tester == "entropy_classical") {
      spec = "dirichlet:n=" + std::to_string(n) + ",seed=" + std::to_string(inst_seed);
    } else if (tester == "entropy_quantum") {
      spec = "haar:n=" + std::to_string(n) + ",rank=" + std::to_string(n) +
             ",seed=" + std::to_string(inst_seed);
    } else if (tester == "l2_classical" || tester == "l1_classical") {
      spec = "pair-l2:n=" + std::to_string(n) + ",dist=" + fmt(e) +
             ",seed=" + std::to_string(inst_seed);
    } else if (tester == "l2_quantum" || tester == "l1_quantum" || tester == "l3") {
      spec = "pair-l2q:n=" + std::to_string(n) + ",dist=" + fmt(e) +
             ",seed=" + std::to_string(inst_seed);
    } else if (tester == "independence") {
      spec = "product:n=" + std::to_string(n) + ",m=" + std::to_string(n) +
             ",seed=" + std::to_string(inst_seed);
    } else {
      throw ConfigError("unknown tester for sweep: " + tester);
    }

    ExperimentConfig cfg;
    cfg.tester = tester;
    cfg.instance = spec;
    cfg.eps = e;
    cfg.nu = nu;
    cfg.trials = trials;
    cfg.seed = Rng::substream(seed, vi).next_u64();
    cfg.mode = mode;
    RunResult rr = run_experiment(cfg);
    SweepPoint pt;
    pt.x = value;
    pt.median_queries = rr.queries_sorted[rr.queries_sorted.size() / 2];
    out.points.push_back(pt);
  }
  // Least-squares slope in log-log space.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double count = static_cast<double>(out.points.size());
  for (const SweepPoint& pt : out.points) {
    double lx = std::log(pt.x);
    double ly = std::log(static_cast<double>(std::max<std::uint64_t>(pt.median_queries, 1)));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return out;
}

std::string sweep_to_csv(const SweepResult& s) {
  std::string out = "# schema: qdpt-sweep-v1\n";
  out += s.variable + ",median_queries\n";
  for (const SweepPoint& pt : s.points) {
    out += fmt(pt.x) + "," + std::to_string(pt.median_queries) + "\n";
  }
  return out;
}

std::string sweep_to_json(const SweepResult& s) {
  json j;
  j["schema"] = "qdpt-sweep-v1";
  j["variable"] = s.variable;
  j["slope"] = s.slope;
  j["points"] = json::array();
  for (const SweepPoint& pt : s.points) {
    j["points"].push_back({{"x", pt.x}, {"median_queries", pt.median_queries}});
  }
  return j.dump(2) + "\n";
}

}  // namespace qdpt

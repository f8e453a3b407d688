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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qdpt/harness.hpp"
#include "qdpt/io.hpp"
#include "qdpt/svt.hpp"

namespace {

using namespace qdpt;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string instance;
  std::string out;
  std::string mode = "semantic";
  std::string route = "auto";
  double eps = 0.25;
  double nu = 0.5;
  int trials = 1;
  std::uint64_t seed = 1;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--set", o.sets, "override config entries, key=value")->take_all();
  cmd->add_option("--instance", o.instance, "instance spec, e.g. uniform:n=32");
  cmd->add_option("--out", o.out, "output directory (rows.csv, summary.json)");
  cmd->add_option("--mode", o.mode, "matrix | semantic | exact");
  cmd->add_option("--eps", o.eps, "accuracy / distance parameter");
  cmd->add_option("--nu", o.nu, "robustness parameter");
  cmd->add_option("--trials", o.trials, "number of seeded trials");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--threads", o.threads, "worker pool size");
}

ExperimentConfig assemble(const CLI::App* cmd, const CommonOpts& o, const std::string& tester) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot open config file: " + o.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = ExperimentConfig::from_json_text(buf.str());
  }
  if (!tester.empty()) cfg.tester = tester;
  auto touched = [&](const char* name) { return cmd->count(name) > 0; };
  if (touched("--instance")) cfg.instance = o.instance;
  if (touched("--out")) cfg.out = o.out;
  if (touched("--mode")) cfg.mode = mode_from_string(o.mode);
  if (touched("--eps")) cfg.eps = o.eps;
  if (touched("--nu")) cfg.nu = o.nu;
  if (touched("--trials")) cfg.trials = o.trials;
  if (touched("--seed")) cfg.seed = o.seed;
  if (touched("--threads")) cfg.threads = o.threads;
  for (const std::string& kv : o.sets) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got: " + kv);
    cfg.set_key(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

int run_and_report(ExperimentConfig cfg) {
  if (cfg.instance.empty()) throw ConfigError("no instance specified");
  RunResult result = run_experiment(cfg);
  std::string summary = summary_to_json(cfg, result);
  if (!cfg.out.empty()) {
    write_outputs(cfg, result);
    std::cerr << "wrote " << cfg.out << "/rows.csv and summary.json ("
              << result.total_wall_ms / 1000.0 << " s)\n";
  }
  if (cfg.bits && !result.rows.empty()) {
    // Display-only conversion; files and stdout stay in nats.
    double ln2 = std::log(2.0);
    double mean_est = 0.0;
    for (const ResultRow& r : result.rows) mean_est += r.estimate;
    mean_est /= result.rows.size();
    std::cerr << "display: mean estimate " << mean_est / ln2 << " bits, ground truth "
              << result.rows.front().truth / ln2 << " bits\n";
  }
  std::cout << summary;
  return 0;
}

int cmd_selftest() {
  // Quick internal checks: lemma certificates, SVT equivalence, AE circuit
  // fidelity. Failures raise and exit 3.
  std::cerr << "selftest: polynomial certificates...\n";
  for (double t : {1.0, 2.0, 4.0}) {
    build_P(t, 0.05);
    build_Q(t, 0.25, 0.05);
  }
  build_S(0.25, 0.05);

  std::cerr << "selftest: svt equivalence...\n";
  ApproxPolynomial sq = exact_polynomial({0.0, 0.0, 1.0}, Parity::kEven, "x^2");
  for (std::uint64_t s = 1; s <= 5; ++s) {
    ProjectedUnitaryEncoding e = random_projected_encoding(12, 5, 7, s);
    TransformedMap tm = apply_svt(e, sq);
    Matrix ref = svt_reference(e, sq);
    if ((tm.full() - ref).cwiseAbs().maxCoeff() > 1e-9) {
      throw InvariantError("selftest: svt mismatch");
    }
  }

  std::cerr << "selftest: amplitude estimation circuit fidelity...\n";
  for (int m : {2, 4, 8}) {
    for (double a : {0.0, 0.2, 0.5, 0.9}) {
      // Outcomes j and M-j yield the same estimate sin^2(j pi / M); compare
      // the induced estimate distributions.
      std::vector<double> analytic = ae_outcome_pmf(a, m);
      std::vector<double> circuit = ae_circuit_pmf(a, m);
      double tv = 0.0;
      for (int j = 0; j <= m / 2; ++j) {
        int jm = (m - j) % m;
        double pa = analytic[j] + (jm != j ? analytic[jm] : 0.0);
        double pc = circuit[j] + (jm != j ? circuit[jm] : 0.0);
        tv += std::abs(pa - pc);
      }
      if (tv / 2.0 > 1e-8) throw InvariantError("selftest: AE distribution mismatch");
    }
  }
  std::cout << "selftest passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdpt: query-counted simulators for distribution property testing"};
  app.require_subcommand(1);

  CommonOpts entropy_opts, l2_opts, l1_opts, l3_opts, ind_opts;
  std::string entropy_kind = "classical", l2_family = "classical", l1_family = "classical";
  std::string l2_route = "auto";
  Index ind_n = 0, ind_m = 0;

  int entropy_boost = 1;
  bool entropy_bits = false;
  CLI::App* entropy = app.add_subcommand("entropy", "estimate Shannon / von Neumann entropy");
  add_common(entropy, entropy_opts);
  entropy->add_option("--kind", entropy_kind, "classical | quantum");
  entropy->add_option("--boost", entropy_boost, "median of this many runs per trial");
  entropy->add_flag("--bits", entropy_bits, "also report entropies in bits (stderr, display only)");

  CLI::App* l2test = app.add_subcommand("l2test", "robust l2 closeness test");
  add_common(l2test, l2_opts);
  l2test->add_option("--family", l2_family, "classical | quantum");
  l2test->add_option("--route", l2_route, "auto | entangled | swap (quantum family)");

  CLI::App* l1test = app.add_subcommand("l1test", "l1 closeness test");
  add_common(l1test, l1_opts);
  l1test->add_option("--family", l1_family, "classical | quantum");

  CLI::App* l3test = app.add_subcommand("l3test", "l3 closeness test (density operators)");
  add_common(l3test, l3_opts);

  CLI::App* independence_cmd = app.add_subcommand("independence", "independence test on [n]x[m]");
  add_common(independence_cmd, ind_opts);
  independence_cmd->add_option("--n", ind_n, "first factor dimension");
  independence_cmd->add_option("--m", ind_m, "second factor dimension");

  // poly subcommand
  std::string poly_which = "S", poly_out;
  double poly_t = 2.0, poly_beta = 0.25, poly_eta = 0.05;
  CLI::App* poly = app.add_subcommand("poly", "dump polynomial coefficients and certificate");
  poly->add_option("--which", poly_which, "P | Q | S");
  poly->add_option("--t", poly_t, "amplification / inverse parameter t");
  poly->add_option("--beta", poly_beta, "domain parameter beta");
  poly->add_option("--eta", poly_eta, "accuracy parameter eta");
  poly->add_option("--out", poly_out, "output file (stdout when omitted)");

  // sweep subcommand
  std::string sweep_tester = "entropy_classical", sweep_variable = "n", sweep_grid, sweep_out,
              sweep_mode = "semantic";
  double sweep_eps = 0.25, sweep_nu = 0.5;
  Index sweep_n = 16;
  int sweep_trials = 3;
  std::uint64_t sweep_seed = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "query-count scaling sweep with log-log fit");
  sweep->add_option("--tester", sweep_tester, "tester name");
  sweep->add_option("--variable", sweep_variable, "n | eps");
  sweep->add_option("--grid", sweep_grid, "comma-separated grid values")->required();
  sweep->add_option("--eps", sweep_eps, "fixed eps (when sweeping n)");
  sweep->add_option("--nu", sweep_nu, "robustness parameter");
  sweep->add_option("--n", sweep_n, "fixed n (when sweeping eps)");
  sweep->add_option("--trials", sweep_trials, "trials per grid point");
  sweep->add_option("--seed", sweep_seed, "master seed");
  sweep->add_option("--mode", sweep_mode, "matrix | semantic");
  sweep->add_option("--out", sweep_out, "output directory");

  CLI::App* selftest = app.add_subcommand("selftest", "run built-in consistency checks");

  try {
    app.parse(argc, argv);

    if (entropy->parsed()) {
      std::string tester =
          (entropy_kind == "quantum") ? "entropy_quantum" : "entropy_classical";
      if (entropy_kind != "quantum" && entropy_kind != "classical") {
        throw ConfigError("entropy --kind must be classical or quantum");
      }
      ExperimentConfig cfg = assemble(entropy, entropy_opts, tester);
      if (entropy->count("--boost")) cfg.boost = entropy_boost;
      if (entropy_bits) cfg.bits = true;
      return run_and_report(cfg);
    }
    if (l2test->parsed()) {
      if (l2_family != "quantum" && l2_family != "classical") {
        throw ConfigError("l2test --family must be classical or quantum");
      }
      ExperimentConfig cfg = assemble(
          l2test, l2_opts, l2_family == "quantum" ? "l2_quantum" : "l2_classical");
      if (l2test->count("--route")) cfg.route = l2_route;
      return run_and_report(cfg);
    }
    if (l1test->parsed()) {
      if (l1_family != "quantum" && l1_family != "classical") {
        throw ConfigError("l1test --family must be classical or quantum");
      }
      return run_and_report(
          assemble(l1test, l1_opts, l1_family == "quantum" ? "l1_quantum" : "l1_classical"));
    }
    if (l3test->parsed()) {
      return run_and_report(assemble(l3test, l3_opts, "l3"));
    }
    if (independence_cmd->parsed()) {
      ExperimentConfig cfg = assemble(independence_cmd, ind_opts, "independence");
      return run_and_report(cfg);
    }
    if (poly->parsed()) {
      ApproxPolynomial p = [&] {
        if (poly_which == "P") return build_P(poly_t, poly_eta);
        if (poly_which == "Q") return build_Q(poly_t, poly_beta, poly_eta);
        if (poly_which == "S") return build_S(poly_beta, poly_eta);
        throw ConfigError("poly --which must be P, Q or S");
      }();
      std::string text = poly_to_json(p) + "\n";
      if (poly_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(poly_out, std::ios::binary);
        out << text;
      }
      return 0;
    }
    if (sweep->parsed()) {
      std::vector<double> values;
      std::stringstream ss(sweep_grid);
      std::string item;
      while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
      SweepResult res = scaling_sweep(sweep_tester, sweep_variable, values, sweep_eps, sweep_nu,
                                      sweep_n, sweep_trials, sweep_seed,
                                      mode_from_string(sweep_mode));
      std::cout << sweep_to_json(res);
      if (!sweep_out.empty()) {
        std::filesystem::create_directories(sweep_out);
        std::ofstream csv(std::filesystem::path(sweep_out) / "sweep.csv", std::ios::binary);
        csv << sweep_to_csv(res);
        std::ofstream js(std::filesystem::path(sweep_out) / "sweep.json", std::ios::binary);
        js << sweep_to_json(res);
      }
      return 0;
    }
    if (selftest->parsed()) {
      return cmd_selftest();
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CertificationError& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

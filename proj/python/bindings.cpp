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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdpt/baselines.hpp"
#include "qdpt/harness.hpp"
#include "qdpt/io.hpp"
#include "qdpt/svt.hpp"

namespace py = pybind11;
using namespace qdpt;

namespace {

py::dict verdict_to_dict(const TesterVerdict& v) {
  py::dict out;
  if (v.far.has_value()) out["far"] = *v.far;
  if (v.estimate.has_value()) out["estimate"] = *v.estimate;
  out["queries"] = v.queries;
  out["seed"] = v.seed;
  py::dict trace;
  for (const StageTrace& st : v.trace) trace[py::str(st.stage)] = st.queries;
  out["trace"] = trace;
  return out;
}

py::dict poly_info(const ApproxPolynomial& p) {
  py::dict out;
  out["degree"] = p.degree();
  out["parity"] = p.parity() == Parity::kEven ? "even" : "odd";
  out["cheb_coefficients"] = p.cheb_coefficients();
  const PolyCertificate& c = p.certificate();
  py::dict cert;
  cert["domain"] = py::make_tuple(c.domain_lo, c.domain_hi);
  cert["max_err_on_domain"] = c.max_err_on_domain;
  cert["relative"] = c.relative;
  cert["max_abs_on_unit_interval"] = c.max_abs_on_unit;
  cert["grid_points"] = c.grid_points;
  out["certificate"] = cert;
  return out;
}

Mode parse_mode(const std::string& mode) { return mode_from_string(mode); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Query-counted simulators for distribution property testing";

  py::register_exception<InvariantError>(m, "InvariantError");
  py::register_exception<CertificationError>(m, "CertificationError");

  py::class_<ClassicalDistribution>(m, "ClassicalDistribution")
      .def(py::init<RealVector>())
      .def_property_readonly("probs", &ClassicalDistribution::probs)
      .def("__len__", &ClassicalDistribution::size);

  py::class_<DensityOperator>(m, "DensityOperator")
      .def(py::init<Matrix>())
      .def_property_readonly("matrix", &DensityOperator::matrix)
      .def_property_readonly("eigenvalues", &DensityOperator::eigenvalues)
      .def_property_readonly("dim", &DensityOperator::dim);

  // Ground truth.
  m.def("shannon_entropy", &shannon_entropy);
  m.def("von_neumann_entropy", &von_neumann_entropy);
  m.def("schatten_distance", &schatten_distance, py::arg("a"), py::arg("b"), py::arg("alpha"));

  // Generators.
  m.def("uniform_distribution", &uniform_distribution);
  m.def("zipf_distribution", &zipf_distribution, py::arg("n"), py::arg("s"));
  m.def("dirichlet_random", &dirichlet_random, py::arg("n"), py::arg("seed"));
  m.def("two_point", &two_point, py::arg("delta"));
  m.def("haar_random_density", &haar_random_density, py::arg("n"), py::arg("rank"),
        py::arg("seed"));
  m.def("l2_separated_pair", &l2_separated_pair, py::arg("n"), py::arg("eps"), py::arg("seed"));
  m.def("l2_separated_density_pair", &l2_separated_density_pair, py::arg("n"), py::arg("eps"),
        py::arg("seed"));
  m.def("product_instance", &product_instance, py::arg("n"), py::arg("m"), py::arg("seed"));
  m.def("correlated_diagonal", &correlated_diagonal, py::arg("n"));

  // Oracles.
  py::class_<PurifiedOracle>(m, "PurifiedOracle")
      .def_property_readonly("ancilla_dim", &PurifiedOracle::ancilla_dim)
      .def_property_readonly("system_dim", &PurifiedOracle::system_dim)
      .def_property_readonly("classical", &PurifiedOracle::classical)
      .def_property_readonly("source_probs", &PurifiedOracle::source_probs)
      .def("purification", [](const PurifiedOracle& o) { return o.purification(); })
      .def("queries", [](const PurifiedOracle& o) { return o.counter()->total(); })
      .def("reset_queries", [](const PurifiedOracle& o) { o.counter()->reset(); })
      .def("with_randomized_ancilla", &PurifiedOracle::with_randomized_ancilla);

  m.def("purify_classical",
        [](const ClassicalDistribution& p, std::uint64_t completion_seed) {
          return PurifiedOracle::purify_classical(p, AncillaStyle::kCopy, completion_seed);
        },
        py::arg("p"), py::arg("completion_seed") = 0);
  m.def("purify_density",
        [](const DensityOperator& rho, std::uint64_t completion_seed) {
          return PurifiedOracle::purify_density(rho, completion_seed);
        },
        py::arg("rho"), py::arg("completion_seed") = 0);
  m.def("from_discrete_query",
        [](const std::vector<Index>& f, Index n) {
          return PurifiedOracle::from_discrete_query(f, n);
        },
        py::arg("table"), py::arg("n"));
  m.def("from_pure_state_oracle",
        [](const RealVector& v) { return PurifiedOracle::from_pure_state_oracle(v); },
        py::arg("amplitudes"));
  m.def("mixture_oracle", &mixture_oracle);
  m.def("product_oracle", &product_oracle, py::arg("oracle"), py::arg("n"), py::arg("m"));

  // Polynomials.
  py::class_<ApproxPolynomial>(m, "ApproxPolynomial")
      .def("__call__", &ApproxPolynomial::eval)
      .def_property_readonly("degree", &ApproxPolynomial::degree)
      .def_property_readonly("info", &poly_info);
  m.def("build_P", &build_P, py::arg("t"), py::arg("eta"));
  m.def("build_Q", &build_Q, py::arg("t"), py::arg("beta"), py::arg("eta"));
  m.def("build_S", &build_S, py::arg("beta"), py::arg("eta"));

  // Amplitude estimation.
  m.def("ae_outcome_pmf", &ae_outcome_pmf, py::arg("a"), py::arg("m"));
  m.def("ae_sample",
        [](double a, int mm, std::uint64_t seed) {
          Rng rng(seed);
          return ae_sample(a, mm, rng);
        },
        py::arg("a"), py::arg("m"), py::arg("seed"));
  m.def("ae_error_bound", &ae_error_bound, py::arg("a"), py::arg("m"));

  // Testers; mode in {"matrix", "semantic", "exact"}.
  m.def("entropy_classical",
        [](const PurifiedOracle& o, double eps, std::uint64_t seed, const std::string& mode) {
          return verdict_to_dict(entropy_classical(o, eps, seed, parse_mode(mode)));
        },
        py::arg("oracle"), py::arg("eps"), py::arg("seed"), py::arg("mode") = "semantic");
  m.def("entropy_quantum",
        [](const PurifiedOracle& o, double eps, std::uint64_t seed, const std::string& mode) {
          return verdict_to_dict(entropy_quantum(o, eps, seed, parse_mode(mode)));
        },
        py::arg("oracle"), py::arg("eps"), py::arg("seed"), py::arg("mode") = "semantic");
  m.def("l2_classical_robust",
        [](const PurifiedOracle& op, const PurifiedOracle& oq, double eps, double nu,
           std::uint64_t seed, const std::string& mode) {
          return verdict_to_dict(l2_classical_robust(op, oq, eps, nu, seed, parse_mode(mode)));
        },
        py::arg("oracle_p"), py::arg("oracle_q"), py::arg("eps"), py::arg("nu"), py::arg("seed"),
        py::arg("mode") = "semantic");
  m.def("l2_quantum",
        [](const PurifiedOracle& o1, const PurifiedOracle& o2, double eps, double nu,
           std::uint64_t seed, const std::string& mode, const std::string& route) {
          L2QuantumRoute r = L2QuantumRoute::kAuto;
          if (route == "entangled") r = L2QuantumRoute::kEntangled;
          else if (route == "swap") r = L2QuantumRoute::kSwap;
          else if (route != "auto") throw InvariantError("route must be auto|entangled|swap");
          return verdict_to_dict(l2_quantum(o1, o2, eps, nu, seed, parse_mode(mode), r));
        },
        py::arg("oracle_rho"), py::arg("oracle_sigma"), py::arg("eps"), py::arg("nu"),
        py::arg("seed"), py::arg("mode") = "semantic", py::arg("route") = "auto");
  m.def("l3_closeness",
        [](const PurifiedOracle& o1, const PurifiedOracle& o2, double eps, std::uint64_t seed,
           const std::string& mode) {
          return verdict_to_dict(l3_closeness(o1, o2, eps, seed, parse_mode(mode)));
        },
        py::arg("oracle_rho"), py::arg("oracle_sigma"), py::arg("eps"), py::arg("seed"),
        py::arg("mode") = "semantic");
  m.def("l1_closeness",
        [](const PurifiedOracle& o1, const PurifiedOracle& o2, double eps, std::uint64_t seed,
           const std::string& mode) {
          return verdict_to_dict(l1_closeness(o1, o2, eps, seed, parse_mode(mode)));
        },
        py::arg("oracle_1"), py::arg("oracle_2"), py::arg("eps"), py::arg("seed"),
        py::arg("mode") = "semantic");
  m.def("independence",
        [](const PurifiedOracle& o, Index n, Index mm, double eps, std::uint64_t seed,
           const std::string& mode) {
          return verdict_to_dict(independence(o, n, mm, eps, seed, parse_mode(mode)));
        },
        py::arg("oracle"), py::arg("n"), py::arg("m"), py::arg("eps"), py::arg("seed"),
        py::arg("mode") = "semantic");

  m.def("entropy_pipeline_exact", &entropy_pipeline_exact, py::arg("oracle"), py::arg("eps"));
  m.def("l2_exact_report", [](const PurifiedOracle& op, const PurifiedOracle& oq, double eps,
                              double nu) {
    L2ExactReport r = l2_exact_report(op, oq, eps, nu);
    py::dict out;
    out["combined"] = r.combined;
    out["l2_squared"] = r.l2_squared;
    out["theta"] = r.theta;
    out["max_inverse_map"] = r.max_inverse_map;
    out["max_amp_map"] = r.max_amp_map;
    return out;
  });

  // Baselines.
  m.def("plugin_entropy",
        [](const ClassicalDistribution& p, std::uint64_t samples, std::uint64_t seed) {
          return plugin_entropy(p, {samples, seed});
        },
        py::arg("p"), py::arg("samples"), py::arg("seed"));
  m.def("collision_l2",
        [](const ClassicalDistribution& p, const ClassicalDistribution& q, std::uint64_t samples,
           std::uint64_t seed) { return collision_l2(p, q, {samples, seed}); },
        py::arg("p"), py::arg("q"), py::arg("samples"), py::arg("seed"));

  // Serialization.
  m.def("distribution_to_json",
        [](const ClassicalDistribution& p) { return distribution_to_json(p); });
  m.def("density_to_json", [](const DensityOperator& r) { return distribution_to_json(r); });
  m.def("parse_distribution_json", [](const std::string& text) -> py::object {
    DistributionInput in = parse_distribution_json(text);
    if (std::holds_alternative<ClassicalDistribution>(in)) {
      return py::cast(std::get<ClassicalDistribution>(in));
    }
    return py::cast(std::get<DensityOperator>(in));
  });
}

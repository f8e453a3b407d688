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
#include <map>

#include "doctest.h"
#include "qdpt/ampest.hpp"
#include "qdpt/generate.hpp"
#include "qdpt/poly.hpp"
#include "qdpt/svt.hpp"
#include "qdpt/testers.hpp"

using namespace qdpt;

namespace {
constexpr double PI = 3.141592653589793238462643383279502884;

// Estimate-level distribution (outcomes j and M-j merge).
std::map<double, double> estimate_pmf(const std::vector<double>& outcome_pmf) {
  int m = static_cast<int>(outcome_pmf.size());
  std::map<double, double> out;
  for (int j = 0; j < m; ++j) {
    double s = std::sin(j * PI / m);
    // Key by the grid index to avoid float-key surprises.
    out[std::round(s * s * 1e12) / 1e12] += outcome_pmf[j];
  }
  return out;
}

}  // namespace

TEST_CASE("degenerate amplitudes are exact") {
  Rng rng(1);
  for (int rep = 0; rep < 200; ++rep) CHECK(ae_sample(0.0, 16, rng) == 0.0);
  // a = sin^2(pi/M) is exactly representable.
  for (int m : {4, 8, 32}) {
    double a = std::pow(std::sin(PI / m), 2);
    std::vector<double> pmf = ae_outcome_pmf(a, m);
    CHECK(pmf[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ae_sample(a, m, rng) == doctest::Approx(a).epsilon(1e-12));
  }
  // a = 1 with even M.
  std::vector<double> pmf = ae_outcome_pmf(1.0, 8);
  CHECK(pmf[4] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("outcome support is exactly the AE grid") {
  Rng rng(3);
  for (int rep = 0; rep < 500; ++rep) {
    double val = ae_sample(0.3, 16, rng);
    bool on_grid = false;
    for (int j = 0; j < 16; ++j) {
      double s = std::sin(j * PI / 16.0);
      if (std::abs(val - s * s) <= 1e-12) on_grid = true;
    }
    CHECK(on_grid);
  }
}

TEST_CASE("empirical frequencies match the analytic distribution") {
  // 1e5 draws per (a, M); 3-sigma multinomial bounds on merged estimates.
  Rng rng(2026);
  const int draws = 100000;
  for (double a : {0.1, 0.5, 0.83}) {
    for (int m : {8, 32}) {
      std::map<double, double> expect = estimate_pmf(ae_outcome_pmf(a, m));
      std::map<double, int> counts;
      for (int d = 0; d < draws; ++d) {
        counts[std::round(ae_sample(a, m, rng) * 1e12) / 1e12]++;
      }
      for (const auto& [val, prob] : expect) {
        if (prob < 1e-6) continue;
        double got = counts.count(val) ? counts[val] : 0;
        double sigma = std::sqrt(prob * (1.0 - prob) * draws);
        CHECK(std::abs(got - prob * draws) <= 3.0 * sigma + 3.0);
      }
    }
  }
}

TEST_CASE("error-bound coverage meets the 8/pi^2 guarantee") {
  Rng rng(7);
  const int draws = 10000;
  for (double a : {0.0, 0.1, 0.3, 0.7, 1.0}) {
    for (int m : {16, 64}) {
      double bound = ae_error_bound(a, m);
      int within = 0;
      for (int d = 0; d < draws; ++d) {
        if (std::abs(ae_sample(a, m, rng) - a) <= bound) ++within;
      }
      CHECK(static_cast<double>(within) / draws >= kAeSuccess - 0.02);
    }
  }
}

TEST_CASE("circuit simulation matches the analytic distribution") {
  for (int m : {2, 4, 8}) {
    for (double a : {0.0, 0.15, 0.3, 0.5, 0.77, 1.0}) {
      std::map<double, double> want = estimate_pmf(ae_outcome_pmf(a, m));
      std::map<double, double> got = estimate_pmf(ae_circuit_pmf(a, m));
      double tv = 0.0;
      for (const auto& [val, prob] : want) {
        double g = got.count(val) ? got[val] : 0.0;
        tv += std::abs(prob - g);
      }
      CHECK(tv / 2.0 <= 1e-8);
    }
  }
}

TEST_CASE("median boosting") {
  Rng rng(10);
  SUBCASE("a = 0 stays 0") {
    AmplitudeEstimate est = ae_boosted(0.0, 32, 0.01, rng);
    CHECK(est.estimate == 0.0);
  }
  SUBCASE("bookkeeping identity") {
    AmplitudeEstimate est = ae_boosted(0.3, 64, 0.01, rng);
    CHECK(est.trials == boost_trials(0.01));
    CHECK(est.queries_charged == static_cast<std::uint64_t>(64) * est.trials);
    CHECK(boost_trials(0.01) == 2 * static_cast<int>(std::ceil(18.0 * std::log(100.0))) + 1);
  }
  SUBCASE("boosted coverage at nu_fail = 0.01") {
    int within = 0;
    const int meta = 10000;
    double bound = ae_error_bound(0.3, 64);
    for (int t = 0; t < meta; ++t) {
      if (std::abs(ae_boosted(0.3, 64, 0.01, rng).estimate - 0.3) <= bound) ++within;
    }
    CHECK(static_cast<double>(within) / meta >= 0.99);
  }
  SUBCASE("monotone query accounting") {
    std::uint64_t q1 = ae_boosted(0.3, 16, 0.1, rng).queries_charged;
    std::uint64_t q2 = ae_boosted(0.3, 32, 0.1, rng).queries_charged;
    std::uint64_t q3 = ae_boosted(0.3, 32, 0.01, rng).queries_charged;
    CHECK(q2 >= q1);
    CHECK(q3 >= q2);
  }
}

TEST_CASE("threshold probabilities agree with Monte Carlo") {
  Rng rng(15);
  double a = 0.22;
  int m = 32;
  double thr = 0.25;
  double p_single = ae_prob_at_least(a, m, thr);
  int hits = 0;
  const int draws = 40000;
  for (int d = 0; d < draws; ++d) {
    if (ae_sample(a, m, rng) >= thr) ++hits;
  }
  double sigma = std::sqrt(p_single * (1 - p_single) / draws);
  CHECK(std::abs(static_cast<double>(hits) / draws - p_single) <= 4.0 * sigma + 1e-4);

  int r = 21;
  double p_boost = ae_boosted_prob_at_least(a, m, r, thr);
  hits = 0;
  const int meta = 20000;
  for (int t = 0; t < meta; ++t) {
    int over = 0;
    for (int i = 0; i < r; ++i) {
      if (ae_sample(a, m, rng) >= thr) ++over;
    }
    if (over >= (r + 1) / 2) ++hits;
  }
  sigma = std::sqrt(std::max(p_boost * (1 - p_boost), 1e-8) / meta);
  CHECK(std::abs(static_cast<double>(hits) / meta - p_boost) <= 4.0 * sigma + 2e-3);
}

TEST_CASE("flag probability") {
  Rng rng(4);
  // |s> = sqrt(0.7)|0,0> + sqrt(0.3)|1,1>: flag-|0> probability 0.7.
  Vector amp = Vector::Zero(4);
  amp[0] = std::sqrt(0.7);
  amp[3] = std::sqrt(0.3);
  PureState s(amp, {2, 2});
  FlagProbability fp = flag_probability(s, 32, 0.05, rng);
  CHECK(fp.exact == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(std::abs(fp.estimate.estimate - 0.7) <= ae_error_bound(0.7, 32) + 1e-12);
  CHECK_THROWS_AS(flag_probability(PureState(amp, {4}), 8, 0.1, rng), InvariantError);
}

TEST_CASE("l3 flag probabilities from the stated formulas") {
  // Equal states: zero; the quantum-l2 entangled route: Tr[(rho-sigma)^2]/(4n).
  DensityOperator rho = haar_random_density(4, 4, 21);
  CHECK(l3_exact_flag_probability(rho, rho) == doctest::Approx(0.0));
  DensityOperator sig = haar_random_density(4, 4, 22);
  Matrix d = rho.matrix() - sig.matrix();
  Matrix s = rho.matrix() + sig.matrix();
  double want = ((d * d * s).trace().real()) / 8.0;
  CHECK(l3_exact_flag_probability(rho, sig) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("overlap estimation") {
  Rng rng(9);
  Vector a(4), b(4);
  a << 0.5, 0.5, 0.5, 0.5;
  b << 0.5, 0.5, 0.5, -0.5;
  PureState sa(a, {4}), sb(b, {4});
  SUBCASE("identical preparations") {
    OverlapEstimate est = overlap_estimate(sa, sa, 64, 0.01, rng);
    CHECK(est.magnitude == doctest::Approx(1.0));
    CHECK(est.estimate >= 1.0 - PI / 64.0 - 1e-9);
  }
  SUBCASE("orthogonal preparations") {
    Vector c = Vector::Zero(4);
    c[1] = 1.0;
    Vector dd = Vector::Zero(4);
    dd[2] = 1.0;
    OverlapEstimate est = overlap_estimate(PureState(c, {4}), PureState(dd, {4}), 64, 0.01, rng);
    CHECK(est.magnitude == doctest::Approx(0.0));
    CHECK(est.estimate == 0.0);
  }
  SUBCASE("partial overlap within the angle bound") {
    OverlapEstimate est = overlap_estimate(sa, sb, 128, 0.01, rng);
    CHECK(est.magnitude == doctest::Approx(0.5));
    CHECK(std::abs(est.estimate - 0.5) <= PI / 128.0 + 1e-9);
  }
  SUBCASE("entropy pipeline overlap equals sum p_i S(sqrt(p_i))") {
    ClassicalDistribution p(two_point(0.25).probs());  // (0.75, 0.25)
    EntropySchedule sched = EntropySchedule::classical(64, 0.25);  // schedule host
    ApproxPolynomial s = build_S(sched.beta, sched.eta);
    PurifiedOracle o = PurifiedOracle::purify_classical(p);
    TransformedMap tm = apply_svt(classical_sqrt_encoding(o).adjoint(), s);
    PureState psi(o.purification(), {o.total_dim()});
    PureState transformed = apply_with_flag(tm.compact, psi, 0);
    // Reference |psi_p>|0_flag>.
    Vector ref = Vector::Zero(2 * psi.dim());
    for (Index i = 0; i < psi.dim(); ++i) ref[2 * i] = psi.amplitudes()[i];
    OverlapEstimate est =
        overlap_estimate(PureState(ref, {psi.dim(), 2}), transformed, 256, 0.01, rng);
    double want = p[0] * s(std::sqrt(p[0])) + p[1] * s(std::sqrt(p[1]));
    CHECK(est.magnitude == doctest::Approx(std::abs(want)).epsilon(1e-10));
    CHECK(std::abs(est.estimate - std::abs(want)) <= PI / 256.0 + 1e-9);
  }
}

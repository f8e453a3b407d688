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

#include "doctest.h"
#include "qdpt/generate.hpp"
#include "qdpt/testers.hpp"

using namespace qdpt;

namespace {

std::uint64_t total_queries(const TesterVerdict& v) {
  std::uint64_t sum = 0;
  for (const StageTrace& st : v.trace) sum += st.queries;
  return sum;
}

ClassicalDistribution padded_point(Index n) {
  RealVector p = RealVector::Zero(n);
  p[0] = 1.0;
  return ClassicalDistribution(p);
}

}  // namespace

TEST_CASE("entropy schedule fields and validity") {
  EntropySchedule s = EntropySchedule::classical(32, 0.25);
  CHECK(s.valid);
  CHECK(s.delta == doctest::Approx(0.25 / (128.0 * std::log(128.0))));
  CHECK(s.beta == doctest::Approx(std::sqrt(s.delta)));
  CHECK(s.eta == doctest::Approx(0.25 / (24.0 * std::log(2.0 / s.beta))));
  CHECK(s.m_ae >= 1);
  // Delta inequality holds whenever the validity flag does.
  CHECK(s.delta * (std::log(1.0 / s.delta) + 1.0) <= 0.25 / 64.0 * (1 + 1e-12));

  CHECK_FALSE(EntropySchedule::classical(8, 0.25).valid);
  PurifiedOracle o = PurifiedOracle::purify_classical(uniform_distribution(8));
  CHECK_THROWS_AS(entropy_classical(o, 0.25, 1), InvariantError);

  // Density schedules rescale the validity condition to n^2.
  EntropySchedule q = EntropySchedule::quantum(8, 0.25);
  CHECK(q.valid);
  CHECK(q.beta == doctest::Approx(std::sqrt(0.25 / (256.0 * std::log(256.0)))));
  CHECK_FALSE(EntropySchedule::quantum(3, 0.25).valid);
}

TEST_CASE("exact-mode entropy identities") {
  SUBCASE("classical pipelines stay within 2 eps / 3") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Index n = 11 + static_cast<Index>(Rng(seed).below(54));
      ClassicalDistribution p = dirichlet_random(n, seed);
      PurifiedOracle o = PurifiedOracle::purify_classical(p);
      double exact = entropy_pipeline_exact(o, 0.25);
      CHECK(std::abs(exact - shannon_entropy(p)) <= 2.0 * 0.25 / 3.0);
    }
  }
  SUBCASE("density pipelines stay within 19 eps / 24") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      DensityOperator rho = haar_random_density(8, 8, seed);
      PurifiedOracle o = PurifiedOracle::purify_density(rho);
      double exact = entropy_pipeline_exact(o, 0.25);
      CHECK(std::abs(exact - von_neumann_entropy(rho)) <= 19.0 * 0.25 / 24.0);
    }
  }
  SUBCASE("diagonal density matches the classical pipeline value") {
    ClassicalDistribution p = dirichlet_random(12, 4);
    Matrix d = Matrix::Zero(12, 12);
    for (Index i = 0; i < 12; ++i) d(i, i) = p[i];
    PurifiedOracle oc = PurifiedOracle::purify_classical(p);
    PurifiedOracle od = PurifiedOracle::purify_density(DensityOperator(d));
    // Same ground truth, both within their budgets.
    CHECK(std::abs(entropy_pipeline_exact(oc, 0.25) - shannon_entropy(p)) <= 0.25);
    CHECK(std::abs(entropy_pipeline_exact(od, 0.25) - shannon_entropy(p)) <= 0.25);
  }
}

TEST_CASE("statistical entropy estimates") {
  SUBCASE("deterministic instance, padded to n = 64") {
    int ok = 0;
    PurifiedOracle o = PurifiedOracle::purify_classical(padded_point(64));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      TesterVerdict v = entropy_classical(o, 0.25, seed);
      if (std::abs(*v.estimate) <= 0.25) ++ok;
    }
    CHECK(ok * 3 >= 2 * 20);
  }
  SUBCASE("uniform n = 32") {
    int ok = 0;
    PurifiedOracle o = PurifiedOracle::purify_classical(uniform_distribution(32));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      TesterVerdict v = entropy_classical(o, 0.25, seed);
      if (std::abs(*v.estimate - std::log(32.0)) <= 0.25) ++ok;
    }
    CHECK(ok * 3 >= 2 * 20);
  }
  SUBCASE("maximally mixed density n = 8") {
    int ok = 0;
    PurifiedOracle o =
        PurifiedOracle::purify_density(DensityOperator(Matrix::Identity(8, 8) / 8.0));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      TesterVerdict v = entropy_quantum(o, 0.25, seed);
      if (std::abs(*v.estimate - std::log(8.0)) <= 0.25) ++ok;
    }
    CHECK(ok * 3 >= 2 * 20);
  }
  SUBCASE("pure density state has near-zero estimate") {
    int ok = 0;
    PurifiedOracle o = PurifiedOracle::purify_density(random_pure_density(8, 3));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      TesterVerdict v = entropy_quantum(o, 0.25, seed);
      if (std::abs(*v.estimate) <= 0.25) ++ok;
    }
    CHECK(ok * 3 >= 2 * 20);
  }
}

TEST_CASE("entropy query accounting") {
  PurifiedOracle o = PurifiedOracle::purify_classical(uniform_distribution(32));
  TesterVerdict v = entropy_classical(o, 0.25, 7);
  CHECK(v.queries == total_queries(v));
  CHECK(v.queries == o.counter()->total());
  CHECK(v.seed == 7);

  // Decreasing eps never decreases the total.
  PurifiedOracle o2 = PurifiedOracle::purify_classical(uniform_distribution(32));
  TesterVerdict v2 = entropy_classical(o2, 0.125, 7);
  CHECK(v2.queries >= v.queries);

  // Repeat run with the same seed is identical.
  PurifiedOracle o3 = PurifiedOracle::purify_classical(uniform_distribution(32));
  TesterVerdict v3 = entropy_classical(o3, 0.25, 7);
  CHECK(*v3.estimate == *v.estimate);
  CHECK(v3.queries == v.queries);
}

TEST_CASE("bin schedule shapes") {
  BinSchedule sched(0.2, 0.5);
  CHECK(sched.theta == doctest::Approx(0.5 * 0.04 / 6.0));
  CHECK(sched.k_count == static_cast<int>(std::ceil(std::log2(1.0 / sched.theta))) + 2);
  CHECK(sched.m_bin(4) == static_cast<int>(std::ceil(38.0 * 4.0)));
  CHECK(sched.bin_threshold(0) == doctest::Approx(3.0 / 8.0));
  CHECK(sched.precision(3) == doctest::Approx(std::pow(2.0, -6) * sched.theta / sched.k_count));
  CHECK(sched.m_ae(-1) >= 1);
  CHECK_THROWS_AS(BinSchedule(1.5, 0.5), InvariantError);
}

TEST_CASE("telescoping exponent identity") {
  // 2^{9-k} * [(p+q)/2] * [2^{-k-2}/(p+q)] * [(p-q)/2^{-k+3}]^2 = (p-q)^2
  Rng rng(5);
  for (int k = -1; k <= 10; ++k) {
    double exponent_sum = std::ldexp(1.0, 9 - k) * 0.5 * std::ldexp(1.0, -k - 2) *
                          std::ldexp(1.0, k - 3) * std::ldexp(1.0, k - 3);
    CHECK(exponent_sum == doctest::Approx(1.0).epsilon(1e-15));
    for (int rep = 0; rep < 5; ++rep) {
      double p = rng.uniform(), q = rng.uniform();
      double lhs = std::ldexp(1.0, 9 - k) * ((p + q) / 2.0) *
                   (std::ldexp(1.0, -k - 2) / (p + q)) *
                   std::pow((p - q) / std::ldexp(1.0, -k + 3), 2);
      CHECK(lhs == doctest::Approx((p - q) * (p - q)).epsilon(1e-12));
    }
  }
}

TEST_CASE("magnitude binning") {
  BinSchedule sched(0.2, 0.5);
  SUBCASE("mass-one element lands in bin -1 or 0") {
    PurifiedOracle op = PurifiedOracle::purify_classical(padded_point(4));
    PurifiedOracle oq = PurifiedOracle::purify_classical(padded_point(4));
    Rng rng(3);
    for (int rep = 0; rep < 25; ++rep) {
      int k = magnitude_bin(op, oq, 0, sched, rng);
      CHECK((k == -1 || k == 0));
    }
    CHECK(op.counter()->total() > 0);
  }
  SUBCASE("zero-mass element always falls through") {
    PurifiedOracle op = PurifiedOracle::purify_classical(padded_point(4));
    PurifiedOracle oq = PurifiedOracle::purify_classical(padded_point(4));
    Rng rng(4);
    for (int rep = 0; rep < 10; ++rep) {
      CHECK(magnitude_bin(op, oq, 3, sched, rng) == kLessThanTheta);
    }
  }
  SUBCASE("soft labels match Monte Carlo frequencies and the two-bucket law") {
    PurifiedOracle op = PurifiedOracle::purify_classical(two_point(0.15));
    PurifiedOracle oq = PurifiedOracle::purify_classical(two_point(0.05));
    // x = 1: p+q = 0.8 -> log2(1/0.8) in (0, 1): admissible bins {0, 1}.
    double a = (0.35 + 0.45) / 2.0;
    std::vector<double> labels = sched.soft_labels(a);
    double off_support = 0.0;
    for (int k = -1; k <= sched.k_max; ++k) {
      if (k != 0 && k != 1) off_support += labels[k + 1];
    }
    CHECK(off_support <= 1e-3);

    Rng rng(8);
    const int draws = 400;
    std::vector<int> counts(sched.k_count + 1, 0);
    for (int d = 0; d < draws; ++d) {
      int k = magnitude_bin(op, oq, 1, sched, rng);
      counts[k == kLessThanTheta ? sched.k_count : k + 1]++;
    }
    for (int idx = 0; idx <= sched.k_count; ++idx) {
      double expect = labels[static_cast<size_t>(idx)] * draws;
      double sigma = std::sqrt(std::max(expect * (1.0 - labels[idx]), 1.0));
      CHECK(std::abs(counts[idx] - expect) <= 4.0 * sigma + 4.0);
    }
  }
}

TEST_CASE("l2 exact-mode identity and contractions") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Index n = 4 + static_cast<Index>(Rng(seed).below(13));
    ClassicalDistribution p = dirichlet_random(n, seed);
    ClassicalDistribution q = dirichlet_random(n, seed + 50);
    PurifiedOracle op = PurifiedOracle::purify_classical(p);
    PurifiedOracle oq = PurifiedOracle::purify_classical(q);
    L2ExactReport rep = l2_exact_report(op, oq, 0.2, 0.5);
    CHECK(rep.combined <= rep.l2_squared + 1e-12);
    CHECK(rep.combined >= rep.l2_squared - 2.0 * rep.theta);
    CHECK(rep.max_inverse_map < 0.5);
    CHECK(rep.max_amp_map < 0.25);
  }
}

TEST_CASE("l2 classical decisions") {
  SUBCASE("equal pair accepted") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      ClassicalDistribution p = dirichlet_random(8, 40 + seed);
      PurifiedOracle op = PurifiedOracle::purify_classical(p);
      PurifiedOracle oq = PurifiedOracle::purify_classical(p);
      TesterVerdict v = l2_classical_robust(op, oq, 0.25, 0.5, seed);
      if (!*v.far) ++ok;
      CHECK(v.queries == total_queries(v));
    }
    CHECK(ok * 3 >= 2 * 12);
  }
  SUBCASE("separated pair rejected") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      auto [p, q] = l2_separated_pair(8, 0.25, 70 + seed);
      PurifiedOracle op = PurifiedOracle::purify_classical(p);
      PurifiedOracle oq = PurifiedOracle::purify_classical(q);
      TesterVerdict v = l2_classical_robust(op, oq, 0.25, 0.5, seed);
      if (*v.far) ++ok;
    }
    CHECK(ok * 3 >= 2 * 12);
  }
  SUBCASE("two-point hard instance at n = 2") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      auto [p, q] = l2_separated_pair(2, 0.2, seed + 1);
      PurifiedOracle op = PurifiedOracle::purify_classical(p);
      PurifiedOracle oq = PurifiedOracle::purify_classical(q);
      TesterVerdict v = l2_classical_robust(op, oq, 0.2, 0.5, seed);
      if (*v.far) ++ok;
    }
    CHECK(ok * 3 >= 2 * 12);
  }
}

TEST_CASE("l2 quantum decisions on both routes") {
  for (L2QuantumRoute route : {L2QuantumRoute::kEntangled, L2QuantumRoute::kSwap}) {
    int yes_ok = 0, no_ok = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      DensityOperator rho = haar_random_density(8, 8, 90 + seed);
      PurifiedOracle o1 = PurifiedOracle::purify_density(rho);
      PurifiedOracle o2 = PurifiedOracle::purify_density(rho);
      TesterVerdict v = l2_quantum(o1, o2, 0.2, 0.5, seed, Mode::kSemantic, route);
      if (!*v.far) ++yes_ok;

      auto [r, s] = l2_separated_density_pair(8, 0.2, 90 + seed);
      PurifiedOracle o3 = PurifiedOracle::purify_density(r);
      PurifiedOracle o4 = PurifiedOracle::purify_density(s);
      TesterVerdict w = l2_quantum(o3, o4, 0.2, 0.5, seed, Mode::kSemantic, route);
      if (*w.far) ++no_ok;
      CHECK(w.queries == total_queries(w));
    }
    CHECK(yes_ok * 3 >= 2 * 10);
    CHECK(no_ok * 3 >= 2 * 10);
  }
  SUBCASE("route auto selection") {
    DensityOperator rho = haar_random_density(4, 4, 5);
    PurifiedOracle o1 = PurifiedOracle::purify_density(rho);
    PurifiedOracle o2 = PurifiedOracle::purify_density(rho);
    // sqrt(4) = 2 <= 1/0.3: entangled; at eps = 0.9 the swap route wins.
    TesterVerdict a = l2_quantum(o1, o2, 0.3, 0.5, 1);
    TesterVerdict b = l2_quantum(o1, o2, 0.9, 0.5, 1);
    CHECK(a.trace[0].stage == "half_difference");
    CHECK(b.trace[0].stage == "swap_tests");
  }
}

TEST_CASE("l3 closeness") {
  SUBCASE("orthogonal pure states: stated arithmetic") {
    Matrix r0 = Matrix::Zero(2, 2), r1 = Matrix::Zero(2, 2);
    r0(0, 0) = 1.0;
    r1(1, 1) = 1.0;
    DensityOperator rho(r0), sig(r1);
    CHECK(l3_exact_flag_probability(rho, sig) == doctest::Approx(0.25));
    CHECK(schatten_distance(rho, sig, 3.0) == doctest::Approx(std::pow(2.0, 1.0 / 3.0)));
    PurifiedOracle o1 = PurifiedOracle::purify_density(rho);
    PurifiedOracle o2 = PurifiedOracle::purify_density(sig);
    int far = 0;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      TesterVerdict v = l3_closeness(o1, o2, 0.5, seed);
      if (*v.far) ++far;
    }
    CHECK(far * 3 >= 2 * 12);
  }
  SUBCASE("identical states never rejected") {
    DensityOperator rho = haar_random_density(4, 4, 2);
    PurifiedOracle o1 = PurifiedOracle::purify_density(rho);
    PurifiedOracle o2 = PurifiedOracle::purify_density(rho);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      TesterVerdict v = l3_closeness(o1, o2, 0.3, seed);
      CHECK_FALSE(*v.far);
    }
  }
  SUBCASE("far instances satisfy the soundness chain") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto [rho, sig] = l2_separated_density_pair(6, 0.3, seed);
      double dist3 = schatten_distance(rho, sig, 3.0);
      double a = l3_exact_flag_probability(rho, sig);
      CHECK(a >= dist3 * dist3 * dist3 / 8.0 - 1e-12);
    }
  }
}

TEST_CASE("l1 closeness and independence reductions") {
  SUBCASE("equal distributions accepted") {
    ClassicalDistribution p = dirichlet_random(4, 17);
    PurifiedOracle op = PurifiedOracle::purify_classical(p);
    PurifiedOracle oq = PurifiedOracle::purify_classical(p);
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      if (!*l1_closeness(op, oq, 0.5, seed).far) ++ok;
    }
    CHECK(ok * 3 >= 2 * 10);
  }
  SUBCASE("stated n = 4 perturbed pair rejected") {
    double eps = 0.5;
    RealVector q(4);
    q << 0.25 + eps / 4, 0.25 - eps / 4, 0.25 + eps / 4, 0.25 - eps / 4;
    PurifiedOracle op = PurifiedOracle::purify_classical(uniform_distribution(4));
    PurifiedOracle oq = PurifiedOracle::purify_classical(ClassicalDistribution(q));
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      if (*l1_closeness(op, oq, eps, seed).far) ++ok;
    }
    CHECK(ok * 3 >= 2 * 10);
  }
  SUBCASE("independence accepts products and rejects the correlated instance") {
    PurifiedOracle prod = PurifiedOracle::purify_classical(product_instance(2, 2, 5));
    PurifiedOracle corr = PurifiedOracle::purify_classical(correlated_diagonal(2));
    int ok_prod = 0, ok_corr = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      if (!*independence(prod, 2, 2, 0.5, seed).far) ++ok_prod;
      if (*independence(corr, 2, 2, 0.5, seed).far) ++ok_corr;
    }
    CHECK(ok_prod * 3 >= 2 * 10);
    CHECK(ok_corr * 3 >= 2 * 10);
    CHECK_THROWS_AS(independence(prod, 3, 2, 0.5, 1), InvariantError);
  }
}

TEST_CASE("matrix and semantic modes produce identical runs") {
  SUBCASE("entropy classical") {
    ClassicalDistribution p = dirichlet_random(12, 3);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      PurifiedOracle o1 = PurifiedOracle::purify_classical(p);
      PurifiedOracle o2 = PurifiedOracle::purify_classical(p);
      TesterVerdict vm = entropy_classical(o1, 0.25, seed, Mode::kMatrix);
      TesterVerdict vs = entropy_classical(o2, 0.25, seed, Mode::kSemantic);
      CHECK(*vm.estimate == doctest::Approx(*vs.estimate).epsilon(1e-12));
      CHECK(vm.queries == vs.queries);
    }
  }
  SUBCASE("entropy quantum") {
    DensityOperator rho = haar_random_density(8, 8, 6);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      PurifiedOracle o1 = PurifiedOracle::purify_density(rho);
      PurifiedOracle o2 = PurifiedOracle::purify_density(rho);
      TesterVerdict vm = entropy_quantum(o1, 0.25, seed, Mode::kMatrix);
      TesterVerdict vs = entropy_quantum(o2, 0.25, seed, Mode::kSemantic);
      CHECK(*vm.estimate == doctest::Approx(*vs.estimate).epsilon(1e-12));
    }
  }
  SUBCASE("l2 classical") {
    auto [p, q] = l2_separated_pair(6, 0.3, 4);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      PurifiedOracle o1 = PurifiedOracle::purify_classical(p);
      PurifiedOracle o2 = PurifiedOracle::purify_classical(q);
      PurifiedOracle o3 = PurifiedOracle::purify_classical(p);
      PurifiedOracle o4 = PurifiedOracle::purify_classical(q);
      TesterVerdict vm = l2_classical_robust(o1, o2, 0.3, 0.5, seed, Mode::kMatrix);
      TesterVerdict vs = l2_classical_robust(o3, o4, 0.3, 0.5, seed, Mode::kSemantic);
      CHECK(*vm.far == *vs.far);
      CHECK(*vm.estimate == doctest::Approx(*vs.estimate).epsilon(1e-9));
      CHECK(vm.queries == vs.queries);
    }
  }
  SUBCASE("l3 and quantum l2") {
    DensityOperator rho = haar_random_density(4, 4, 8);
    DensityOperator sig = haar_random_density(4, 4, 9);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      PurifiedOracle o1 = PurifiedOracle::purify_density(rho);
      PurifiedOracle o2 = PurifiedOracle::purify_density(sig);
      TesterVerdict vm = l3_closeness(o1, o2, 0.4, seed, Mode::kMatrix);
      TesterVerdict vs = l3_closeness(o1, o2, 0.4, seed, Mode::kSemantic);
      CHECK(*vm.estimate == doctest::Approx(*vs.estimate).epsilon(1e-10));
      CHECK(*vm.far == *vs.far);
      for (L2QuantumRoute route : {L2QuantumRoute::kEntangled, L2QuantumRoute::kSwap}) {
        TesterVerdict qm = l2_quantum(o1, o2, 0.3, 0.5, seed, Mode::kMatrix, route);
        TesterVerdict qs = l2_quantum(o1, o2, 0.3, 0.5, seed, Mode::kSemantic, route);
        CHECK(*qm.estimate == doctest::Approx(*qs.estimate).epsilon(1e-9));
        CHECK(*qm.far == *qs.far);
      }
    }
  }
}

TEST_CASE("estimators are invariant under adversarial completions") {
  // Randomized orthonormal completion plus a random unitary on the ancilla
  // register must not change any seeded estimator output.
  ClassicalDistribution p = dirichlet_random(12, 31);
  DensityOperator rho = haar_random_density(8, 8, 32);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    PurifiedOracle plain = PurifiedOracle::purify_classical(p);
    PurifiedOracle adv =
        PurifiedOracle::purify_classical(p, AncillaStyle::kTrivial, 555).with_randomized_ancilla(777);
    TesterVerdict v1 = entropy_classical(plain, 0.25, seed, Mode::kMatrix);
    TesterVerdict v2 = entropy_classical(adv, 0.25, seed, Mode::kMatrix);
    CHECK(*v1.estimate == doctest::Approx(*v2.estimate).epsilon(1e-10));

    PurifiedOracle dplain = PurifiedOracle::purify_density(rho);
    PurifiedOracle dadv =
        PurifiedOracle::purify_density(rho, 919).with_randomized_ancilla(313);
    TesterVerdict w1 = entropy_quantum(dplain, 0.25, seed, Mode::kMatrix);
    TesterVerdict w2 = entropy_quantum(dadv, 0.25, seed, Mode::kMatrix);
    CHECK(*w1.estimate == doctest::Approx(*w2.estimate).epsilon(1e-10));
  }
}

TEST_CASE("query monotonicity and trace consistency across testers") {
  auto [p, q] = l2_separated_pair(8, 0.3, 2);
  PurifiedOracle op = PurifiedOracle::purify_classical(p);
  PurifiedOracle oq = PurifiedOracle::purify_classical(q);
  TesterVerdict coarse = l2_classical_robust(op, oq, 0.3, 0.5, 1);
  PurifiedOracle op2 = PurifiedOracle::purify_classical(p);
  PurifiedOracle oq2 = PurifiedOracle::purify_classical(q);
  TesterVerdict fine = l2_classical_robust(op2, oq2, 0.15, 0.5, 1);
  CHECK(fine.queries >= coarse.queries);
  CHECK(coarse.queries == total_queries(coarse));

  DensityOperator rho = haar_random_density(4, 4, 2);
  DensityOperator sig = haar_random_density(4, 4, 3);
  PurifiedOracle o1 = PurifiedOracle::purify_density(rho);
  PurifiedOracle o2 = PurifiedOracle::purify_density(sig);
  TesterVerdict l3a = l3_closeness(o1, o2, 0.4, 1);
  CHECK(l3a.queries == total_queries(l3a));
  std::uint64_t after_first = o1.counter()->total();
  TesterVerdict l3b = l3_closeness(o1, o2, 0.2, 1);
  CHECK(l3b.queries == total_queries(l3b));
  CHECK(l3b.queries >= l3a.queries);
  CHECK(o1.counter()->total() > after_first);
}

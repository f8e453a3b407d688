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

#include "qdpt/testers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

#include "qdpt/svt.hpp"

namespace qdpt {

namespace {

constexpr double PI = 3.141592653589793238462643383279502884;

// Matrix-mode size caps (see docs/layout.md).
constexpr Index kMatrixCapClassicalEntropy = 32;
constexpr Index kMatrixCapDensity = 16;
constexpr Index kMatrixCapL2Combined = 2048;  // ancilla_dim * n of the mixture encoding

// The schedules re-build the same polynomials for every trial; cache them.
class PolyCache {
 public:
  const ApproxPolynomial& get(const std::string& key,
                              const std::function<ApproxPolynomial()>& build) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, std::make_unique<ApproxPolynomial>(build())).first;
    }
    return *it->second;
  }

 private:
  std::mutex mu_;
  std::map<std::string, std::unique_ptr<ApproxPolynomial>> cache_;
};

PolyCache& poly_cache() {
  static PolyCache cache;
  return cache;
}

std::string key_of(const char* name, double a, double b, double c) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s|%.17g|%.17g|%.17g", name, a, b, c);
  return buf;
}

const ApproxPolynomial& cached_S(double beta, double eta) {
  return poly_cache().get(key_of("S", beta, eta, 0), [&] { return build_S(beta, eta); });
}

const ApproxPolynomial& cached_inverse(double c, double x_lo, double eta) {
  return poly_cache().get(key_of("inv", c, x_lo, eta),
                          [&] { return build_inverse_scaled(c, x_lo, eta); });
}

const ApproxPolynomial& cached_Q(double t, double beta, double eta) {
  return poly_cache().get(key_of("Q", t, beta, eta), [&] { return build_Q(t, beta, eta); });
}

std::uint64_t counters_total(std::initializer_list<const PurifiedOracle*> oracles) {
  std::uint64_t total = 0;
  for (const PurifiedOracle* o : oracles) total += o->counter()->total();
  return total;
}

// Splits a combined (forward+inverse) count for the counters.
void charge_total(const PurifiedOracle& o, std::uint64_t total, std::uint64_t refl = 0) {
  o.charge_use((total + 1) / 2, total / 2, refl);
}

double two_pow(int k) { return std::ldexp(1.0, k); }

}  // namespace

Mode mode_from_string(const std::string& s) {
  if (s == "matrix") return Mode::kMatrix;
  if (s == "semantic") return Mode::kSemantic;
  if (s == "exact") return Mode::kExact;
  throw InvariantError("unknown mode: " + s);
}

std::string mode_to_string(Mode m) {
  switch (m) {
    case Mode::kMatrix:
      return "matrix";
    case Mode::kSemantic:
      return "semantic";
    case Mode::kExact:
      return "exact";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

EntropySchedule EntropySchedule::classical(Index n, double eps) {
  EntropySchedule s;
  s.n = n;
  s.eps = eps;
  s.valid = (static_cast<double>(n) / eps >= 42.0);
  s.delta = eps / (4.0 * static_cast<double>(n) * std::log(static_cast<double>(n) / eps));
  s.beta = std::sqrt(s.delta);
  s.log_2_over_beta = std::log(2.0 / s.beta);
  s.eta = eps / (24.0 * s.log_2_over_beta);
  s.m_ae = static_cast<int>(std::ceil(12.0 * PI * s.log_2_over_beta / eps));
  if (s.valid) {
    double lhs = s.delta * (std::log(1.0 / s.delta) + 1.0);
    if (lhs > eps / (2.0 * static_cast<double>(n)) * (1.0 + 1e-12)) {
      throw InvariantError("entropy schedule: Delta inequality violated");
    }
  }
  return s;
}

EntropySchedule EntropySchedule::quantum(Index n, double eps) {
  // The singular values are sqrt(p_i / n), so the estimator at dimension n
  // behaves like the classical one at effective dimension n^2: the same
  // schedule formulas apply with n <- n^2, and the validity condition
  // rescales to n^2/eps >= 42. The eigenvalue cutoff is c0 = n * delta and
  // beta' = sqrt(c0 / n) = sqrt(delta).
  //
  // Error budget (deterministic part, in units of the final estimate):
  //   large eigenvalues (p >= c0): eta' * sum p  -> eps/6;
  //   small ones: [n c0 ln n + n c0 (ln(1/c0) + 1)]/(4 L') -> eps/8 + eps/2
  //   (the first term uses ln(n^2/eps) >= 2 ln n, the second the Delta
  //   inequality at n^2), leaving 5 eps/24 for amplitude estimation:
  //   tolerance 5 eps / (96 L').
  EntropySchedule s;
  s.n = n;
  s.eps = eps;
  s.density = true;
  double n2 = static_cast<double>(n) * static_cast<double>(n);
  s.valid = (n2 / eps >= 42.0);
  s.delta = eps / (4.0 * n2 * std::log(n2 / eps));
  s.beta = std::sqrt(s.delta);
  s.log_2_over_beta = std::log(2.0 / s.beta);
  s.eta = eps / (24.0 * s.log_2_over_beta);
  s.m_ae = static_cast<int>(std::ceil(96.0 * PI * s.log_2_over_beta / (5.0 * eps)));
  if (s.valid) {
    double c0 = static_cast<double>(n) * s.delta;
    double lhs = c0 * (std::log(1.0 / c0) + 1.0);
    if (lhs > eps / (2.0 * static_cast<double>(n)) * (1.0 + 1e-12)) {
      throw InvariantError("entropy schedule: rescaled Delta inequality violated");
    }
  }
  return s;
}

BinSchedule::BinSchedule(double eps_in, double nu_in) {
  if (!(eps_in > 0.0 && eps_in < 1.0 && nu_in > 0.0 && nu_in < 1.0)) {
    throw InvariantError("BinSchedule: eps, nu must lie in (0, 1)");
  }
  eps = eps_in;
  nu = nu_in;
  theta = nu * eps * eps / 6.0;
  k_max = static_cast<int>(std::ceil(std::log2(1.0 / theta)));
  k_count = k_max + 2;
  double ne = nu * eps;
  nu_fail_bin = std::min(1e-4, ne * ne * ne * ne / 16.0);
  r_bin = boost_trials(nu_fail_bin);
  nu_fail_ae = 1.0 / (10.0 * k_count);
  r_ae = boost_trials(nu_fail_ae);
}

int BinSchedule::m_bin(int k) const {
  return static_cast<int>(std::ceil(kMagnitudeConst * std::pow(2.0, k / 2.0)));
}

double BinSchedule::precision(int k) const { return two_pow(k - 9) * theta / k_count; }

int BinSchedule::m_ae(int k) const {
  double tau = precision(k);
  double bbar = two_pow(k - 9) * std::min(2.0, 4.0 * eps * eps);
  double m = PI * (std::sqrt(bbar) + std::sqrt(bbar + tau)) / tau;
  return std::max(1, static_cast<int>(std::ceil(m)));
}

double BinSchedule::greater_prob(double a, int k) const {
  return ae_boosted_prob_at_least(a, m_bin(k), r_bin, bin_threshold(k));
}

std::vector<double> BinSchedule::soft_labels(double a) const {
  std::vector<double> s(k_count + 1, 0.0);
  double survive = 1.0;
  for (int k = -1; k <= k_max; ++k) {
    double g = greater_prob(a, k);
    s[k + 1] = survive * g;
    survive *= (1.0 - g);
  }
  s[k_count] = survive;  // "less than theta"
  return s;
}

int magnitude_bin(const PurifiedOracle& op, const PurifiedOracle& oq, Index x,
                  const BinSchedule& schedule, Rng& rng) {
  const RealVector& p = op.classical_source().probs();
  const RealVector& q = oq.classical_source().probs();
  if (x < 0 || x >= p.size()) throw InvariantError("magnitude_bin: x out of range");
  double a = (p[x] + q[x]) / 2.0;
  for (int k = -1; k <= schedule.k_max; ++k) {
    // Each A_k run: r_bin AE trials on the purification of (p+q)/2, one
    // forward and one inverse query per AE round.
    std::uint64_t rounds =
        static_cast<std::uint64_t>(schedule.r_bin) * static_cast<std::uint64_t>(schedule.m_bin(k));
    op.charge_use(rounds, rounds);
    oq.charge_use(rounds, rounds);
    AmplitudeEstimate est = ae_boosted(a, schedule.m_bin(k), schedule.nu_fail_bin, rng);
    if (est.estimate >= schedule.bin_threshold(k)) return k;
  }
  return kLessThanTheta;
}

// ---------------------------------------------------------------------------
// Entropy estimation
// ---------------------------------------------------------------------------

namespace {

// Deterministic overlap of the transformed state with the input
// purification: sum_i p_i S(sqrt(p_i)) classically, sum_i p_i S(sqrt(p_i/n))
// for density sources.
double entropy_overlap_semantic(const PurifiedOracle& o, const ApproxPolynomial& s, bool density) {
  RealVector p = o.source_probs();
  double n = static_cast<double>(o.system_dim());
  double acc = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    double x = density ? std::sqrt(p[i] / n) : std::sqrt(p[i]);
    acc += p[i] * s(x);
  }
  return acc;
}

double entropy_overlap_matrix(const PurifiedOracle& o, const ApproxPolynomial& s, bool density) {
  if (!density) {
    if (o.system_dim() > kMatrixCapClassicalEntropy) {
      throw InvariantError("matrix mode: classical entropy capped at n <= 32");
    }
    ProjectedUnitaryEncoding enc = classical_sqrt_encoding(o);
    // Even transform of the adjoint encoding; its compact matrix acts on
    // the A (x) B register pair directly (docs/layout.md).
    TransformedMap tm = apply_svt(enc.adjoint(), s);
    const Vector& psi = o.purification();
    Vector out = tm.compact * psi;
    return psi.dot(out).real();
  }
  if (o.system_dim() > kMatrixCapDensity) {
    throw InvariantError("matrix mode: density pipelines capped at n <= 16");
  }
  ProjectedUnitaryEncoding enc = density_sqrt_encoding(o);
  TransformedMap tm = apply_svt(enc, s);  // n x n operator on the B register
  PureState psi(o.purification(), {o.ancilla_dim(), o.system_dim()});
  PureState flagged = apply_with_flag(tm.compact, psi, 1);
  // Overlap of |psi>|0_flag> with the dilated output.
  const Vector& amps = flagged.amplitudes();
  cxd acc(0, 0);
  for (Index i = 0; i < psi.dim(); ++i) acc += std::conj(psi.amplitudes()[i]) * amps[2 * i];
  return acc.real();
}

TesterVerdict entropy_impl(const PurifiedOracle& o, double eps, std::uint64_t seed, Mode mode,
                           bool density, int boost) {
  if (boost < 1) throw InvariantError("entropy: boost must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw InvariantError("entropy: eps must lie in (0, 1)");
  Index n = o.system_dim();
  EntropySchedule sched =
      density ? EntropySchedule::quantum(n, eps) : EntropySchedule::classical(n, eps);
  if (!sched.valid) {
    throw InvariantError("entropy: schedule requires n/eps >= 42");
  }
  const ApproxPolynomial& s = cached_S(sched.beta, sched.eta);
  double scale = 4.0 * sched.log_2_over_beta;
  double offset = density ? std::log(static_cast<double>(n)) : 0.0;

  double overlap = (mode == Mode::kMatrix) ? entropy_overlap_matrix(o, s, density)
                                           : entropy_overlap_semantic(o, s, density);

  TesterVerdict v;
  v.seed = seed;
  if (mode == Mode::kExact) {
    v.estimate = scale * overlap - offset;
    return v;
  }

  std::uint64_t before = counters_total({&o});
  Rng rng = Rng::substream(seed, 0);
  double a = std::min(1.0, overlap * overlap);
  std::vector<double> draws(boost);
  for (int t = 0; t < boost; ++t) draws[t] = std::sqrt(ae_sample(a, sched.m_ae, rng));
  std::nth_element(draws.begin(), draws.begin() + boost / 2, draws.end());
  v.estimate = scale * draws[boost / 2] - offset;

  // Per AE round the walk operator applies the transformed-state
  // preparation (deg + 1 queries) and the reference preparation (1 query)
  // once forward and once inverse each.
  std::uint64_t m = static_cast<std::uint64_t>(sched.m_ae) * static_cast<std::uint64_t>(boost);
  std::uint64_t deg = static_cast<std::uint64_t>(s.degree());
  std::uint64_t svt_q = 2 * m * deg;
  std::uint64_t prep_q = 4 * m;
  charge_total(o, svt_q + prep_q, 2 * m * deg);
  v.trace = {{"svt", svt_q}, {"state_prep", prep_q}};
  v.queries = counters_total({&o}) - before;
  return v;
}

}  // namespace

TesterVerdict entropy_classical(const PurifiedOracle& o, double eps, std::uint64_t seed,
                                Mode mode, int boost) {
  if (!o.classical()) {
    throw InvariantError("entropy_classical: oracle must serve a classical distribution");
  }
  return entropy_impl(o, eps, seed, mode, /*density=*/false, boost);
}

TesterVerdict entropy_quantum(const PurifiedOracle& o, double eps, std::uint64_t seed, Mode mode,
                              int boost) {
  if (o.ancilla_dim() != o.system_dim()) {
    throw InvariantError("entropy_quantum: oracle must have ancilla_dim == system_dim");
  }
  return entropy_impl(o, eps, seed, mode, /*density=*/true, boost);
}

double entropy_pipeline_exact(const PurifiedOracle& o, double eps) {
  bool density = !o.classical();
  TesterVerdict v = entropy_impl(o, eps, 0, Mode::kExact, density, 1);
  return *v.estimate;
}

// ---------------------------------------------------------------------------
// Robust l2 closeness, classical
// ---------------------------------------------------------------------------

namespace {

struct BinMaps {
  const ApproxPolynomial* inverse = nullptr;    // P-style map for this bin
  const ApproxPolynomial* amplifier = nullptr;  // Q-style map (k >= 2)
  double amp_scale = 1.0;  // exact scalar for k < 2 (block rescaling)
  std::uint64_t deg_p = 0, deg_q = 0;
};

BinMaps bin_maps(const BinSchedule& sched, int k) {
  BinMaps maps;
  double eta_map = std::min(0.4, std::max(sched.precision(k) / 4.0, 1e-12));
  double x_lo = 0.99 * std::pow(2.0, -(k + 2) / 2.0);
  double c = std::pow(2.0, -(k + 3) / 2.0);
  maps.inverse = &cached_inverse(c, x_lo, eta_map);
  maps.deg_p = static_cast<std::uint64_t>(maps.inverse->degree());
  if (k >= 2) {
    double t = std::pow(2.0, (k - 2) / 2.0);
    maps.amplifier = &cached_Q(t, 0.25, eta_map);
    maps.deg_q = static_cast<std::uint64_t>(maps.amplifier->degree());
  } else {
    maps.amp_scale = std::pow(2.0, (k - 2) / 2.0);
    maps.deg_q = 1;  // identity transform plus an exact block rescaling
  }
  return maps;
}

double amplified_value(const BinMaps& maps, double sqrt_prob) {
  if (maps.amplifier != nullptr) return (*maps.amplifier)(sqrt_prob);
  return maps.amp_scale * sqrt_prob;
}

// Exact bin quantity with the polynomial maps, computed from amplitudes.
double bin_quantity_semantic(const RealVector& p, const RealVector& q,
                             const std::vector<std::vector<double>>& labels, int k,
                             const BinMaps& maps) {
  double acc = 0.0;
  for (Index x = 0; x < p.size(); ++x) {
    double sk = labels[x][k + 1];
    if (sk <= 0.0) continue;
    double half_sum = (p[x] + q[x]) / 2.0;
    if (half_sum <= 0.0) continue;
    double m1 = (*maps.inverse)(std::sqrt(half_sum));
    double gp = amplified_value(maps, std::sqrt(p[x]));
    double gq = amplified_value(maps, std::sqrt(q[x]));
    double m2 = (gp * gp - gq * gq) / 2.0;
    acc += sk * half_sum * m1 * m1 * m2 * m2;
  }
  return acc;
}

// Same quantity through explicit operator objects (matrix mode): the
// inverse map from apply_svt on the mixture encoding, the difference block
// from the gram squares of the amplified p/q encodings.
double bin_quantity_matrix(const PurifiedOracle& mix, const ProjectedUnitaryEncoding& enc_mix,
                           const ProjectedUnitaryEncoding& enc_p,
                           const ProjectedUnitaryEncoding& enc_q,
                           const std::vector<std::vector<double>>& labels, int k,
                           const BinMaps& maps) {
  TransformedMap tm1 = apply_svt(enc_mix.adjoint(), *maps.inverse);

  Matrix gram_p, gram_q;
  if (maps.amplifier != nullptr) {
    TransformedMap tp = apply_svt(enc_p, *maps.amplifier);
    TransformedMap tq = apply_svt(enc_q, *maps.amplifier);
    gram_p = tp.compact.adjoint() * tp.compact;
    gram_q = tq.compact.adjoint() * tq.compact;
  } else {
    double s2 = maps.amp_scale * maps.amp_scale;
    gram_p = s2 * (enc_p.compact().adjoint() * enc_p.compact());
    gram_q = s2 * (enc_q.compact().adjoint() * enc_q.compact());
  }
  Matrix diff = (gram_p - gram_q) / 2.0;

  Index da = mix.ancilla_dim(), n = mix.system_dim();
  Vector v = mix.purification();
  for (Index a = 0; a < da; ++a) {
    for (Index x = 0; x < n; ++x) {
      v[a * n + x] *= std::sqrt(labels[x][k + 1]);
    }
  }
  Vector w1 = tm1.compact * v;
  Vector w2 = apply_to_register(diff, w1, {da, n}, 1);
  return w2.squaredNorm();
}

struct L2Charges {
  std::uint64_t binning = 0, inverse_map = 0, amplifier = 0, prep = 0;
};

// Per-oracle query counts; every AE round applies the walk operator and its
// inverse, each containing the label computation, the inverse-map SVT, the
// two amplifier gram blocks and the state preparation.
L2Charges l2_charges(const BinSchedule& sched, const std::vector<BinMaps>& maps) {
  L2Charges c;
  std::uint64_t label_cum = 0;
  for (int k = -1; k <= sched.k_max; ++k) {
    label_cum +=
        static_cast<std::uint64_t>(sched.r_bin) * static_cast<std::uint64_t>(sched.m_bin(k));
    std::uint64_t rounds =
        static_cast<std::uint64_t>(sched.m_ae(k)) * static_cast<std::uint64_t>(sched.r_ae);
    const BinMaps& m = maps[k + 1];
    c.binning += rounds * 2 * label_cum;
    c.inverse_map += rounds * 2 * m.deg_p;
    c.amplifier += rounds * 4 * m.deg_q;
    c.prep += rounds * 2;
  }
  return c;
}

}  // namespace

TesterVerdict l2_classical_robust(const PurifiedOracle& op, const PurifiedOracle& oq, double eps,
                                  double nu, std::uint64_t seed, Mode mode) {
  if (!op.classical() || !oq.classical()) {
    throw InvariantError("l2_classical_robust: classical oracles required");
  }
  if (op.system_dim() != oq.system_dim()) {
    throw InvariantError("l2_classical_robust: dimension mismatch");
  }
  BinSchedule sched(eps, nu);
  const RealVector& p = op.classical_source().probs();
  const RealVector& q = oq.classical_source().probs();
  Index n = p.size();

  TesterVerdict v;
  v.seed = seed;

  if (mode == Mode::kExact) {
    L2ExactReport rep = l2_exact_report(op, oq, eps, nu);
    v.estimate = rep.combined;
    v.far = (rep.combined >= eps * eps - 3.0 * sched.theta);
    return v;
  }

  std::vector<std::vector<double>> labels(n);
  for (Index x = 0; x < n; ++x) labels[x] = sched.soft_labels((p[x] + q[x]) / 2.0);

  std::vector<BinMaps> maps;
  maps.reserve(sched.k_count);
  for (int k = -1; k <= sched.k_max; ++k) maps.push_back(bin_maps(sched, k));

  std::optional<PurifiedOracle> mix;
  std::optional<ProjectedUnitaryEncoding> enc_mix, enc_p, enc_q;
  if (mode == Mode::kMatrix) {
    mix.emplace(mixture_oracle(op, oq));
    if (mix->ancilla_dim() * mix->system_dim() > kMatrixCapL2Combined) {
      throw InvariantError("matrix mode: l2 pipeline size cap exceeded");
    }
    enc_mix.emplace(classical_sqrt_encoding(*mix));
    enc_p.emplace(classical_sqrt_encoding(op));
    enc_q.emplace(classical_sqrt_encoding(oq));
  }

  std::uint64_t before = counters_total({&op, &oq});
  double total = 0.0;
  for (int k = -1; k <= sched.k_max; ++k) {
    double bk = (mode == Mode::kMatrix)
                    ? bin_quantity_matrix(*mix, *enc_mix, *enc_p, *enc_q, labels, k, maps[k + 1])
                    : bin_quantity_semantic(p, q, labels, k, maps[k + 1]);
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(100 + k + 1));
    AmplitudeEstimate est = ae_boosted(std::min(1.0, bk), sched.m_ae(k), sched.nu_fail_ae, rng);
    total += two_pow(9 - k) * est.estimate;
  }

  L2Charges charges = l2_charges(sched, maps);
  std::uint64_t per_oracle =
      charges.binning + charges.inverse_map + charges.amplifier + charges.prep;
  std::uint64_t refl = charges.inverse_map + charges.amplifier;
  charge_total(op, per_oracle, refl);
  charge_total(oq, per_oracle, refl);

  v.far = (total >= eps * eps - 3.0 * sched.theta);
  v.estimate = total;
  v.trace = {{"binning", 2 * charges.binning},
             {"svt_inverse_map", 2 * charges.inverse_map},
             {"svt_amplifier", 2 * charges.amplifier},
             {"state_prep", 2 * charges.prep}};
  v.queries = counters_total({&op, &oq}) - before;
  return v;
}

L2ExactReport l2_exact_report(const PurifiedOracle& op, const PurifiedOracle& oq, double eps,
                              double nu) {
  BinSchedule sched(eps, nu);
  const RealVector& p = op.classical_source().probs();
  const RealVector& q = oq.classical_source().probs();
  Index n = p.size();

  L2ExactReport rep;
  rep.theta = sched.theta;
  rep.l2_squared = (p - q).squaredNorm();
  rep.bin_values.assign(sched.k_count, 0.0);

  for (Index x = 0; x < n; ++x) {
    double sum = p[x] + q[x];
    double diff = p[x] - q[x];
    if (sum <= 0.0) continue;
    std::vector<double> labels = sched.soft_labels(sum / 2.0);
    for (int k = -1; k <= sched.k_max; ++k) {
      double sk = labels[k + 1];
      if (sk <= 0.0) continue;
      double inv_map = two_pow(-k - 2) / sum;   // applied as sqrt(.)
      double amp_map = diff / two_pow(-k + 3);  // (p-q)/2^{-k+3}
      rep.bin_values[k + 1] += sk * (sum / 2.0) * inv_map * amp_map * amp_map;
      // Sub-normalization facts for admissibly binned x.
      bool admissible = sum > two_pow(-k - 1) && sum < two_pow(-k + 1);
      if (admissible && sk > 1e-12) {
        rep.max_inverse_map = std::max(rep.max_inverse_map, inv_map);
        rep.max_amp_map = std::max(rep.max_amp_map, std::abs(amp_map));
      }
    }
  }
  for (int k = -1; k <= sched.k_max; ++k) {
    rep.combined += two_pow(9 - k) * rep.bin_values[k + 1];
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Quantum l2 closeness
// ---------------------------------------------------------------------------

namespace {

double trace_product(const Matrix& a, const Matrix& b) { return (a * b).trace().real(); }

}  // namespace

TesterVerdict l2_quantum(const PurifiedOracle& orho, const PurifiedOracle& osigma, double eps,
                         double nu, std::uint64_t seed, Mode mode, L2QuantumRoute route) {
  if (orho.system_dim() != osigma.system_dim()) {
    throw InvariantError("l2_quantum: dimension mismatch");
  }
  if (!(eps > 0.0 && eps < 1.0 && nu > 0.0 && nu < 1.0)) {
    throw InvariantError("l2_quantum: eps, nu must lie in (0, 1)");
  }
  Index n = orho.system_dim();
  double dn = static_cast<double>(n);
  if (route == L2QuantumRoute::kAuto) {
    route = (std::sqrt(dn) <= 1.0 / eps) ? L2QuantumRoute::kEntangled : L2QuantumRoute::kSwap;
  }

  Matrix rho = orho.source_density().matrix();
  Matrix sig = osigma.source_density().matrix();
  double thr = (eps * eps + (1.0 - nu) * (1.0 - nu) * eps * eps) / 2.0;

  TesterVerdict v;
  v.seed = seed;

  if (mode == Mode::kExact) {
    Matrix d = rho - sig;
    double tr2 = (d.adjoint() * d).trace().real();
    v.estimate = tr2;
    v.far = tr2 >= thr;
    return v;
  }

  std::uint64_t before = counters_total({&orho, &osigma});
  Rng rng = Rng::substream(seed, 7);

  if (route == L2QuantumRoute::kEntangled) {
    double a_exact;
    if (mode == Mode::kMatrix) {
      if (n > kMatrixCapDensity) throw InvariantError("matrix mode: l2_quantum capped at n <= 16");
      BlockEncoding bd = half_difference(block_encode_density(orho), block_encode_density(osigma));
      Vector omega = Vector::Zero(n * n);
      for (Index j = 0; j < n; ++j) omega[j * n + j] = 1.0 / std::sqrt(dn);
      PureState ent(omega, {n, n});
      PureState flagged = apply_with_flag(bd.block(), ent, 0);
      double a = 0.0;
      for (Index i = 0; i < ent.dim(); ++i) a += std::norm(flagged.amplitudes()[2 * i]);
      a_exact = a;
    } else {
      Matrix d = rho - sig;
      a_exact = (d.adjoint() * d).trace().real() / (4.0 * dn);
    }
    double tau = nu * eps * eps * (2.0 - nu) / (16.0 * dn);
    double abar = std::min(1.0, eps * eps / dn);
    int m = std::max(
        1, static_cast<int>(std::ceil(PI * (std::sqrt(abar) + std::sqrt(abar + tau)) / tau)));
    double est = ae_sample(std::min(1.0, a_exact), m, rng);
    double value = 4.0 * dn * est;
    v.far = value >= thr;
    v.estimate = value;
    // Per AE round the half-difference walk costs one block-encoding use
    // (2 queries per oracle) forward and inverse.
    std::uint64_t mq = static_cast<std::uint64_t>(m);
    charge_total(orho, 4 * mq);
    charge_total(osigma, 4 * mq);
    v.trace = {{"half_difference", 8 * mq}};
  } else {
    double t_rr, t_ss, t_rs;
    if (mode == Mode::kMatrix) {
      if (n > kMatrixCapDensity) throw InvariantError("matrix mode: l2_quantum capped at n <= 16");
      // Swap-test overlap from the two purifications.
      auto swap_overlap = [](const PurifiedOracle& o1, const PurifiedOracle& o2) {
        const Vector& v1 = o1.purification();
        const Vector& v2 = o2.purification();
        Index da1 = o1.ancilla_dim(), db = o1.system_dim();
        Index da2 = o2.ancilla_dim();
        cxd acc(0, 0);
        for (Index a1 = 0; a1 < da1; ++a1)
          for (Index b1 = 0; b1 < db; ++b1)
            for (Index a2 = 0; a2 < da2; ++a2)
              for (Index b2 = 0; b2 < db; ++b2)
                acc += std::conj(v1[a1 * db + b1]) * std::conj(v2[a2 * db + b2]) *
                       v1[a1 * db + b2] * v2[a2 * db + b1];
        return acc.real();
      };
      t_rr = swap_overlap(orho, orho);
      t_ss = swap_overlap(osigma, osigma);
      t_rs = swap_overlap(orho, osigma);
    } else {
      t_rr = trace_product(rho, rho);
      t_ss = trace_product(sig, sig);
      t_rs = trace_product(rho, sig);
    }
    double tau_w = nu * eps * eps * (2.0 - nu) / 20.0;
    int m =
        std::max(1, static_cast<int>(std::ceil(PI * (1.0 + std::sqrt(1.0 + tau_w)) / tau_w)));
    // Three independent estimates; each boosted so the joint success
    // probability stays above 2/3.
    double nu_fail = 0.05;
    auto w_est = [&](double tr) {
      return ae_boosted(std::min(1.0, (1.0 + tr) / 2.0), m, nu_fail, rng).estimate;
    };
    double w_rr = w_est(t_rr), w_ss = w_est(t_ss), w_rs = w_est(t_rs);
    double est = (2.0 * w_rr - 1.0) - 2.0 * (2.0 * w_rs - 1.0) + (2.0 * w_ss - 1.0);
    v.far = est >= thr;
    v.estimate = est;
    std::uint64_t rounds =
        static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(boost_trials(nu_fail));
    // rho-rho test: 2 queries/round to U_rho; sigma-sigma: 2 to U_sigma;
    // the cross test: 1 each; all doubled for the inverse walk step.
    charge_total(orho, rounds * 4 + rounds * 2);
    charge_total(osigma, rounds * 4 + rounds * 2);
    v.trace = {{"swap_tests", rounds * 12}};
  }
  v.queries = counters_total({&orho, &osigma}) - before;
  return v;
}

// ---------------------------------------------------------------------------
// l3 closeness
// ---------------------------------------------------------------------------

double l3_exact_flag_probability(const DensityOperator& rho, const DensityOperator& sigma) {
  Matrix d = rho.matrix() - sigma.matrix();
  Matrix s = rho.matrix() + sigma.matrix();
  return (d * d * s).trace().real() / 8.0;
}

TesterVerdict l3_closeness(const PurifiedOracle& orho, const PurifiedOracle& osigma, double eps,
                           std::uint64_t seed, Mode mode) {
  if (orho.system_dim() != osigma.system_dim()) {
    throw InvariantError("l3_closeness: dimension mismatch");
  }
  if (!(eps > 0.0 && eps < 1.0)) throw InvariantError("l3_closeness: eps must lie in (0, 1)");

  TesterVerdict v;
  v.seed = seed;
  double threshold = eps * eps * eps / 16.0;

  double a_exact;
  if (mode == Mode::kMatrix) {
    Index n = orho.system_dim();
    if (n > kMatrixCapDensity) throw InvariantError("matrix mode: l3 capped at n <= 16");
    PurifiedOracle mix = mixture_oracle(orho, osigma);
    BlockEncoding bd = half_difference(block_encode_density(orho), block_encode_density(osigma));
    PureState psi(mix.purification(), {mix.ancilla_dim(), mix.system_dim()});
    PureState flagged = apply_with_flag(bd.block(), psi, 1);
    double a = 0.0;
    for (Index i = 0; i < psi.dim(); ++i) a += std::norm(flagged.amplitudes()[2 * i]);
    a_exact = a;
  } else {
    a_exact = l3_exact_flag_probability(orho.source_density(), osigma.source_density());
  }

  if (mode == Mode::kExact) {
    v.estimate = a_exact;
    v.far = a_exact >= threshold;
    return v;
  }

  std::uint64_t before = counters_total({&orho, &osigma});
  Rng rng = Rng::substream(seed, 3);
  int m = static_cast<int>(std::ceil(72.0 * std::pow(eps, -1.5)));
  double est = ae_sample(std::min(1.0, a_exact), m, rng);
  v.far = est >= threshold;
  v.estimate = est;

  // Per AE round: mixture preparation (1 query per oracle) plus the
  // half-difference block (2 per oracle), forward and inverse.
  std::uint64_t mq = static_cast<std::uint64_t>(m);
  charge_total(orho, 6 * mq);
  charge_total(osigma, 6 * mq);
  v.trace = {{"state_prep", 4 * mq}, {"half_difference", 8 * mq}};
  v.queries = counters_total({&orho, &osigma}) - before;
  return v;
}

// ---------------------------------------------------------------------------
// l1 and independence reductions
// ---------------------------------------------------------------------------

TesterVerdict l1_closeness(const PurifiedOracle& o1, const PurifiedOracle& o2, double eps,
                           std::uint64_t seed, Mode mode) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvariantError("l1_closeness: eps must lie in (0, 1)");
  double n = static_cast<double>(o1.system_dim());
  double eps2 = eps / std::sqrt(n);
  // Robustness is only needed one-sided here: the equal case has l2
  // distance exactly 0, so nu is pinned at 1/2.
  if (o1.classical() && o2.classical()) {
    return l2_classical_robust(o1, o2, eps2, 0.5, seed, mode);
  }
  return l2_quantum(o1, o2, eps2, 0.5, seed, mode);
}

TesterVerdict independence(const PurifiedOracle& op, Index n, Index m, double eps,
                           std::uint64_t seed, Mode mode) {
  if (op.system_dim() != n * m) {
    throw InvariantError("independence: oracle dimension does not factor as n x m");
  }
  PurifiedOracle prod = product_oracle(op, n, m);
  return l1_closeness(op, prod, eps, seed, mode);
}

}  // namespace qdpt

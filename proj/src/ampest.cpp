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

#include "qdpt/ampest.hpp"

#include <algorithm>
#include <cmath>

namespace qdpt {

namespace {
constexpr double PI = 3.141592653589793238462643383279502884;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }
}  // namespace

std::vector<double> ae_outcome_pmf(double a, int m) {
  if (m < 1) throw InvariantError("ae: M must be >= 1");
  a = clamp01(a);
  double theta = std::asin(std::sqrt(a));
  std::vector<double> pmf(m);
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    double delta = theta - j * PI / m;
    double s = std::sin(delta);
    double val;
    if (std::abs(s) < 1e-14) {
      val = 1.0;  // limit of sin^2(M d)/(M^2 sin^2 d) as d -> multiple of pi
    } else {
      double ratio = std::sin(m * delta) / (m * s);
      val = ratio * ratio;
    }
    pmf[j] = val;
    total += val;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvariantError("ae_outcome_pmf: normalization error " + std::to_string(total));
  }
  for (double& v : pmf) v /= total;
  return pmf;
}

double ae_sample(double a, int m, Rng& rng) {
  std::vector<double> pmf = ae_outcome_pmf(a, m);
  double u = rng.uniform();
  double acc = 0.0;
  int j = m - 1;
  for (int i = 0; i < m; ++i) {
    acc += pmf[i];
    if (u < acc) {
      j = i;
      break;
    }
  }
  double s = std::sin(j * PI / m);
  return s * s;
}

int boost_trials(double nu_fail) {
  if (!(nu_fail > 0.0 && nu_fail < 1.0)) throw InvariantError("boost_trials: nu_fail in (0,1)");
  return 2 * static_cast<int>(std::ceil(18.0 * std::log(1.0 / nu_fail))) + 1;
}

AmplitudeEstimate ae_boosted(double a, int m, double nu_fail, Rng& rng) {
  int r = boost_trials(nu_fail);
  // One pmf + CDF, r inverse-CDF draws.
  std::vector<double> pmf = ae_outcome_pmf(a, m);
  std::vector<double> cdf(pmf.size());
  double acc = 0.0;
  for (size_t i = 0; i < pmf.size(); ++i) {
    acc += pmf[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  std::vector<double> draws(r);
  for (int t = 0; t < r; ++t) {
    double u = rng.uniform();
    int j = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    j = std::min<int>(j, m - 1);
    double s = std::sin(j * PI / m);
    draws[t] = s * s;
  }
  std::nth_element(draws.begin(), draws.begin() + r / 2, draws.end());
  AmplitudeEstimate out;
  out.estimate = draws[r / 2];
  out.m = m;
  out.trials = r;
  out.queries_charged = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(r);
  return out;
}

double ae_error_bound(double a, int m) {
  a = clamp01(a);
  return 2.0 * PI * std::sqrt(a * (1.0 - a)) / m + PI * PI / (static_cast<double>(m) * m);
}

double ae_prob_at_least(double a, int m, double threshold) {
  std::vector<double> pmf = ae_outcome_pmf(a, m);
  double p = 0.0;
  for (int j = 0; j < m; ++j) {
    double s = std::sin(j * PI / m);
    if (s * s >= threshold) p += pmf[j];
  }
  return clamp01(p);
}

double ae_boosted_prob_at_least(double a, int m, int trials, double threshold) {
  // Median >= thr iff at least (trials+1)/2 of the draws are >= thr.
  double p = ae_prob_at_least(a, m, threshold);
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  int need = (trials + 1) / 2;
  // Stable binomial tail in log space.
  double logp = std::log(p), logq = std::log1p(-p);
  double tail = 0.0;
  double logc = 0.0;  // log C(trials, 0)
  for (int k = 0; k <= trials; ++k) {
    if (k >= need) tail += std::exp(logc + k * logp + (trials - k) * logq);
    logc += std::log(static_cast<double>(trials - k)) - std::log(static_cast<double>(k + 1));
  }
  return clamp01(tail);
}

std::vector<double> ae_circuit_pmf(double a, int m) {
  // One-qubit target: |psi> = cos t |0> + sin t |1>, good state |1>.
  // Grover operator G = R_psi R_good with R_psi = 2|psi><psi| - I and
  // R_good = I - 2|1><1|; phase estimation with an M-point register.
  a = clamp01(a);
  double t = std::asin(std::sqrt(a));
  Matrix g(2, 2);
  Matrix rpsi(2, 2), rgood(2, 2);
  Vector psi(2);
  psi << std::cos(t), std::sin(t);
  rpsi = 2.0 * psi * psi.adjoint() - Matrix::Identity(2, 2);
  rgood = Matrix::Identity(2, 2);
  rgood(1, 1) = -1.0;
  g = rpsi * rgood;

  // state on C^M (x) C^2, uniform register (QFT on |0>), then controlled
  // powers of G, then inverse QFT.
  Index dim = static_cast<Index>(m) * 2;
  Vector state = Vector::Zero(dim);
  double amp = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix gp = Matrix::Identity(2, 2);
  for (int x = 0; x < m; ++x) {
    Vector target = gp * psi;
    state[2 * x] = amp * target[0];
    state[2 * x + 1] = amp * target[1];
    gp = g * gp;
  }
  // Inverse QFT on the register: <j| F^dagger |x> = exp(-2 pi i j x / M)/sqrt(M).
  std::vector<double> pmf(m, 0.0);
  for (int j = 0; j < m; ++j) {
    cxd acc0(0, 0), acc1(0, 0);
    for (int x = 0; x < m; ++x) {
      double ang = -2.0 * PI * j * x / m;
      cxd w(std::cos(ang), std::sin(ang));
      acc0 += w * state[2 * x];
      acc1 += w * state[2 * x + 1];
    }
    acc0 /= std::sqrt(static_cast<double>(m));
    acc1 /= std::sqrt(static_cast<double>(m));
    pmf[j] = std::norm(acc0) + std::norm(acc1);
  }
  return pmf;
}

FlagProbability flag_probability(const PureState& s, int m, double nu_fail, Rng& rng) {
  const auto& dims = s.register_dims();
  if (dims.empty() || dims.back() != 2) {
    throw InvariantError("flag_probability: last register must be a flag qubit");
  }
  double a = 0.0;
  const Vector& amps = s.amplitudes();
  for (Index i = 0; i < amps.size(); i += 2) a += std::norm(amps[i]);
  FlagProbability out;
  out.exact = clamp01(a);
  out.estimate = ae_boosted(out.exact, m, nu_fail, rng);
  return out;
}

OverlapEstimate overlap_estimate_value(double overlap, int m, double nu_fail, Rng& rng) {
  OverlapEstimate out;
  out.exact_overlap = overlap;
  out.magnitude = std::abs(overlap);
  double a = clamp01(out.magnitude * out.magnitude);
  out.ae = ae_boosted(a, m, nu_fail, rng);
  out.estimate = std::sqrt(out.ae.estimate);
  return out;
}

OverlapEstimate overlap_estimate(const PureState& s1, const PureState& s2, int m, double nu_fail,
                                 Rng& rng) {
  if (s1.dim() != s2.dim()) throw InvariantError("overlap_estimate: dimension mismatch");
  cxd ov = s1.amplitudes().dot(s2.amplitudes());
  OverlapEstimate out = overlap_estimate_value(std::abs(ov), m, nu_fail, rng);
  out.exact_overlap = ov.real();
  out.magnitude = std::abs(ov);
  return out;
}

}  // namespace qdpt

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

#include "qdpt/generate.hpp"

#include <cmath>

namespace qdpt {

ClassicalDistribution uniform_distribution(Index n) {
  if (n < 1) throw InvariantError("uniform: n must be >= 1");
  return ClassicalDistribution(RealVector::Constant(n, 1.0 / static_cast<double>(n)));
}

ClassicalDistribution zipf_distribution(Index n, double s) {
  if (n < 1 || s < 0.0) throw InvariantError("zipf: need n >= 1 and s >= 0");
  RealVector p(n);
  for (Index i = 0; i < n; ++i) p[i] = std::pow(static_cast<double>(i + 1), -s);
  p /= p.sum();
  return ClassicalDistribution(std::move(p));
}

ClassicalDistribution dirichlet_random(Index n, std::uint64_t seed) {
  if (n < 1) throw InvariantError("dirichlet: n must be >= 1");
  Rng rng(seed);
  RealVector p(n);
  for (Index i = 0; i < n; ++i) p[i] = rng.exponential();
  p /= p.sum();
  return ClassicalDistribution(std::move(p));
}

ClassicalDistribution two_point(double delta) {
  if (delta < 0.0 || delta > 0.5) throw InvariantError("two_point: delta must be in [0, 1/2]");
  RealVector p(2);
  p << 0.5 + delta, 0.5 - delta;
  return ClassicalDistribution(std::move(p));
}

DensityOperator haar_random_density(Index n, Index rank, std::uint64_t seed) {
  if (n < 1 || rank < 1 || rank > n) throw InvariantError("haar_random_density: invalid rank");
  Rng rng(seed);
  Matrix g(n, rank);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < rank; ++j) g(i, j) = cxd(rng.normal(), rng.normal());
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return DensityOperator(std::move(rho));
}

Matrix haar_random_unitary(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = cxd(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the result is Haar-distributed, not just unitary.
  for (Index j = 0; j < n; ++j) {
    cxd d = r(j, j);
    q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : cxd(1.0, 0.0));
  }
  return q;
}

DensityOperator random_pure_density(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = cxd(rng.normal(), rng.normal());
  v /= v.norm();
  Matrix rho = v * v.adjoint();
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return DensityOperator(std::move(rho));
}

std::pair<ClassicalDistribution, ClassicalDistribution> l2_separated_pair(Index n, double eps,
                                                                          std::uint64_t seed) {
  if (n < 2) throw InvariantError("l2_separated_pair: n must be >= 2");
  if (!(eps > 0.0 && eps <= 0.6)) throw InvariantError("l2_separated_pair: eps out of range");
  Rng rng(seed);

  if (n == 2) {
    // The two-outcome hard instance: q = (1/2 + eps/sqrt(2), 1/2 - eps/sqrt(2)).
    double delta = eps / std::sqrt(2.0);
    RealVector p(2), q(2);
    p << 0.5, 0.5;
    q << 0.5 + delta, 0.5 - delta;
    return {ClassicalDistribution(std::move(p)), ClassicalDistribution(std::move(q))};
  }

  Index m = (n % 2 == 0) ? n : n - 1;  // coordinates carrying the shift
  double shift = eps / std::sqrt(static_cast<double>(m));

  if (shift <= 0.88 * 0.95 / static_cast<double>(n)) {
    // Spread route: alternate +-eps/sqrt(m) over a random half/half sign
    // pattern on a near-uniform base. Keeps q non-negative and the sums and
    // the l2 distance exact.
    RealVector base(n);
    for (Index i = 0; i < n; ++i) base[i] = rng.exponential();
    base /= base.sum();
    RealVector p = 0.95 * RealVector::Constant(n, 1.0 / static_cast<double>(n)) + 0.05 * base;
    std::vector<Index> order(m);
    for (Index i = 0; i < m; ++i) order[i] = i;
    for (Index i = m - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    RealVector q = p;
    for (Index i = 0; i < m; ++i) q[order[i]] += (i < m / 2) ? shift : -shift;
    return {ClassicalDistribution(std::move(p)), ClassicalDistribution(std::move(q))};
  }

  // Concentrated route: the whole difference sits on two heavy coordinates.
  double delta = eps / std::sqrt(2.0);
  if (delta > 0.45) throw InvariantError("l2_separated_pair: eps too large");
  double heavy = delta + std::min(0.1, (1.0 - 2.0 * delta) / 4.0);
  RealVector rest(n);
  for (Index i = 0; i < n; ++i) rest[i] = rng.exponential();
  rest[0] = rest[1] = 0.0;
  double rest_mass = 1.0 - 2.0 * heavy;
  if (n > 2) rest *= rest_mass / rest.sum();
  RealVector p = rest;
  p[0] = heavy;
  p[1] = heavy;
  if (n == 2) {
    p[0] = 0.5;
    p[1] = 0.5;
  }
  RealVector q = p;
  q[0] += delta;
  q[1] -= delta;
  return {ClassicalDistribution(std::move(p)), ClassicalDistribution(std::move(q))};
}

std::pair<DensityOperator, DensityOperator> l2_separated_density_pair(Index n, double eps,
                                                                      std::uint64_t seed) {
  if (n < 2) throw InvariantError("l2_separated_density_pair: n must be >= 2");
  Rng rng(seed);
  // Shift the spectrum of a well-conditioned base state inside its own
  // eigenbasis; trace is preserved pairwise and the Schatten-2 distance is
  // exact by construction.
  DensityOperator base = haar_random_density(n, n, rng.next_u64());
  Matrix mixed = 0.3 * base.matrix() + 0.7 * Matrix::Identity(n, n) / static_cast<double>(n);
  mixed = ((mixed + mixed.adjoint()) / 2.0).eval();
  DensityOperator rho(mixed);

  Index m = (n % 2 == 0) ? n : n - 1;
  double shift = eps / std::sqrt(static_cast<double>(m));
  RealVector vals = rho.eigenvalues();
  Matrix vecs = rho.eigenvectors();
  RealVector shifted = vals;
  if (shift <= 0.9 * vals[m - 1]) {
    for (Index i = 0; i < m; ++i) shifted[i] += (i % 2 == 0) ? shift : -shift;
  } else {
    // Concentrate the difference on two heavy eigenvalues; reshape the base
    // spectrum in its own eigenbasis so both states stay PSD.
    double delta = eps / std::sqrt(2.0);
    if (delta > 0.45) throw InvariantError("l2_separated_density_pair: eps too large");
    double heavy = delta + std::min(0.1, (1.0 - 2.0 * delta) / 4.0);
    double rest = (n > 2) ? (1.0 - 2.0 * heavy) / static_cast<double>(n - 2) : 0.0;
    vals.setConstant(rest);
    vals[0] = heavy;
    vals[1] = heavy;
    if (n == 2) {
      vals[0] = 0.5;
      vals[1] = 0.5;
    }
    Matrix base = vecs * vals.asDiagonal() * vecs.adjoint();
    rho = DensityOperator(((base + base.adjoint()) / 2.0).eval());
    shifted = vals;
    shifted[0] += delta;
    shifted[1] -= delta;
  }
  Matrix sig = vecs * shifted.asDiagonal() * vecs.adjoint();
  sig = ((sig + sig.adjoint()) / 2.0).eval();
  return {std::move(rho), DensityOperator(std::move(sig))};
}

ClassicalDistribution product_instance(Index n, Index m, std::uint64_t seed) {
  Rng rng(seed);
  RealVector a(n), b(m);
  for (Index i = 0; i < n; ++i) a[i] = rng.exponential() + 0.1;
  for (Index j = 0; j < m; ++j) b[j] = rng.exponential() + 0.1;
  a /= a.sum();
  b /= b.sum();
  RealVector p(n * m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) p[i * m + j] = a[i] * b[j];
  p /= p.sum();
  return ClassicalDistribution(std::move(p));
}

ClassicalDistribution correlated_diagonal(Index n) {
  RealVector p = RealVector::Zero(n * n);
  for (Index i = 0; i < n; ++i) p[i * n + i] = 1.0 / static_cast<double>(n);
  return ClassicalDistribution(std::move(p));
}

RealVector marginal_a(const ClassicalDistribution& p, Index n, Index m) {
  if (n * m != p.size()) throw InvariantError("marginal_a: n*m must equal |p|");
  RealVector a = RealVector::Zero(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) a[i] += p[i * m + j];
  return a;
}

RealVector marginal_b(const ClassicalDistribution& p, Index n, Index m) {
  if (n * m != p.size()) throw InvariantError("marginal_b: n*m must equal |p|");
  RealVector b = RealVector::Zero(m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) b[j] += p[i * m + j];
  return b;
}

ClassicalDistribution product_of_marginals(const ClassicalDistribution& p, Index n, Index m) {
  RealVector a = marginal_a(p, n, m);
  RealVector b = marginal_b(p, n, m);
  RealVector out(n * m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) out[i * m + j] = a[i] * b[j];
  out /= out.sum();
  return ClassicalDistribution(std::move(out));
}

}  // namespace qdpt

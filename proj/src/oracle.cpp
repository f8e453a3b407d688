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

#include "qdpt/oracle.hpp"

#include <cmath>

#include "qdpt/generate.hpp"

namespace qdpt {

namespace {

// Guards against accidentally materializing astronomically large objects in
// semantic-mode runs. Matrix-mode caps are documented in docs/layout.md.
constexpr Index kMaxUnitaryDim = 1 << 12;
constexpr Index kMaxStateDim = 1 << 22;

Index checked_state_dim(Index d) {
  if (d > kMaxStateDim) {
    throw InvariantError("purification too large to materialize (" + std::to_string(d) + ")");
  }
  return d;
}

}  // namespace

Matrix complete_unitary(const Vector& first_column, std::uint64_t completion_seed) {
  Index d = first_column.size();
  if (d > kMaxUnitaryDim) {
    throw InvariantError("unitary too large to materialize (" + std::to_string(d) + ")");
  }
  if (std::abs(first_column.norm() - 1.0) > 1e-9) {
    throw InvariantError("complete_unitary: column must be normalized");
  }
  // QR of [c | e_...] yields a unitary whose first column is c up to phase;
  // strip the phase so the first column is exact.
  Matrix m = Matrix::Identity(d, d);
  m.col(0) = first_column;
  // Swap out the identity column most parallel to c to keep full rank.
  Index jmax;
  first_column.cwiseAbs().maxCoeff(&jmax);
  if (jmax != 0) m.col(jmax) = basis_vector(d, 0);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  cxd phase = q.col(0).dot(first_column);  // = e^{-i theta} for unit vectors
  q.col(0) = first_column;
  for (Index j = 1; j < d; ++j) q.col(j) *= phase;
  if (completion_seed != 0) {
    Matrix v = haar_random_unitary(d - 1, completion_seed);
    Matrix rot = Matrix::Identity(d, d);
    rot.block(1, 1, d - 1, d - 1) = v;
    q = q * rot;
  }
  return q;
}

const ClassicalDistribution& PurifiedOracle::classical_source() const {
  if (!classical()) throw InvariantError("oracle does not serve a classical distribution");
  return std::get<ClassicalDistribution>(source_);
}

const DensityOperator& PurifiedOracle::density_source() const {
  if (classical()) throw InvariantError("oracle serves a classical distribution");
  return std::get<DensityOperator>(source_);
}

DensityOperator PurifiedOracle::source_density() const {
  if (classical()) {
    const RealVector& p = classical_source().probs();
    Matrix m = Matrix::Zero(p.size(), p.size());
    for (Index i = 0; i < p.size(); ++i) m(i, i) = p[i];
    return DensityOperator(std::move(m));
  }
  return density_source();
}

RealVector PurifiedOracle::source_probs() const {
  if (classical()) return classical_source().probs();
  return density_source().eigenvalues();
}

Matrix PurifiedOracle::source_basis() const {
  if (classical()) return Matrix::Identity(db_, db_);
  return density_source().eigenvectors();
}

const Vector& PurifiedOracle::purification() const {
  if (purification_cache_->size() == 0) {
    *purification_cache_ = purification_builder_();
  }
  return *purification_cache_;
}

Matrix PurifiedOracle::unitary() const { return unitary_builder_(); }

Matrix PurifiedOracle::ancilla_states() const {
  const Vector& psi = purification();
  RealVector probs = source_probs();
  Matrix basis = source_basis();
  Matrix phi = Matrix::Zero(da_, probs.size());
  for (Index i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 1e-15) continue;
    // phi_i = (I_A (x) <psi_i|) |psi> / sqrt(p_i)
    for (Index a = 0; a < da_; ++a) {
      cxd acc(0, 0);
      for (Index b = 0; b < db_; ++b) acc += std::conj(basis(b, i)) * psi[a * db_ + b];
      phi(a, i) = acc / std::sqrt(probs[i]);
    }
  }
  return phi;
}

void PurifiedOracle::charge_use(std::uint64_t fwd, std::uint64_t inv, std::uint64_t refl) const {
  for (const auto& e : charges_) {
    e.counter->charge(e.weight * fwd, e.weight * inv, e.weight * refl);
  }
}

PurifiedOracle PurifiedOracle::with_randomized_ancilla(std::uint64_t seed) const {
  PurifiedOracle out = *this;
  Index da = da_, db = db_;
  auto base_purification = purification_builder_;
  auto base_unitary = unitary_builder_;
  out.purification_cache_ = std::make_shared<Vector>();
  out.purification_builder_ = [da, db, seed, base_purification]() {
    Matrix v = haar_random_unitary(da, seed);
    Vector psi = base_purification();
    Vector res(psi.size());
    for (Index b = 0; b < db; ++b) {
      for (Index a = 0; a < da; ++a) {
        cxd acc(0, 0);
        for (Index a2 = 0; a2 < da; ++a2) acc += v(a, a2) * psi[a2 * db + b];
        res[a * db + b] = acc;
      }
    }
    return res;
  };
  out.unitary_builder_ = [da, db, seed, base_unitary]() {
    Matrix v = haar_random_unitary(da, seed);
    return Matrix(kron(v, Matrix::Identity(db, db)) * base_unitary());
  };
  return out;
}

PurifiedOracle PurifiedOracle::purify_classical(const ClassicalDistribution& p, AncillaStyle style,
                                                std::uint64_t completion_seed) {
  PurifiedOracle o;
  Index n = p.size();
  o.da_ = n;
  o.db_ = n;
  o.source_ = p;
  o.style_ = style;
  o.charges_ = {{o.counter_, 1}};
  RealVector probs = p.probs();
  o.purification_builder_ = [probs, n]() {
    Vector psi = Vector::Zero(checked_state_dim(n * n));
    for (Index i = 0; i < n; ++i) psi[i * n + i] = std::sqrt(probs[i]);
    return psi;
  };
  auto pb = o.purification_builder_;
  o.unitary_builder_ = [pb, completion_seed]() { return complete_unitary(pb(), completion_seed); };
  return o;
}

PurifiedOracle PurifiedOracle::purify_density(const DensityOperator& rho,
                                              std::uint64_t completion_seed) {
  PurifiedOracle o;
  Index n = rho.dim();
  o.da_ = n;
  o.db_ = n;
  o.source_ = rho;
  o.charges_ = {{o.counter_, 1}};
  RealVector vals = rho.eigenvalues();
  Matrix vecs = rho.eigenvectors();
  o.purification_builder_ = [vals, vecs, n]() {
    Vector psi = Vector::Zero(checked_state_dim(n * n));
    for (Index i = 0; i < n; ++i) {
      double amp = std::sqrt(std::max(vals[i], 0.0));
      if (amp == 0.0) continue;
      for (Index b = 0; b < n; ++b) psi[i * n + b] = amp * vecs(b, i);
    }
    return psi;
  };
  auto pb = o.purification_builder_;
  o.unitary_builder_ = [pb, completion_seed]() { return complete_unitary(pb(), completion_seed); };
  return o;
}

PurifiedOracle PurifiedOracle::from_discrete_query(const std::vector<Index>& f, Index n,
                                                   std::uint64_t completion_seed) {
  if (f.empty()) throw InvariantError("from_discrete_query: table must be non-empty");
  Index s_count = static_cast<Index>(f.size());
  RealVector hist = RealVector::Zero(n);
  for (Index v : f) {
    if (v < 0 || v >= n) throw InvariantError("from_discrete_query: table value out of range");
    hist[v] += 1.0;
  }
  hist /= static_cast<double>(s_count);

  PurifiedOracle o;
  o.da_ = s_count;
  o.db_ = n;
  o.source_ = ClassicalDistribution(hist);
  o.charges_ = {{o.counter_, 1}};
  std::vector<Index> table = f;
  o.purification_builder_ = [table, s_count, n]() {
    Vector psi = Vector::Zero(checked_state_dim(s_count * n));
    double amp = 1.0 / std::sqrt(static_cast<double>(s_count));
    for (Index s = 0; s < s_count; ++s) psi[s * n + table[s]] = amp;
    return psi;
  };
  auto pb = o.purification_builder_;
  o.unitary_builder_ = [pb, completion_seed]() { return complete_unitary(pb(), completion_seed); };
  return o;
}

PurifiedOracle PurifiedOracle::from_pure_state_oracle(const RealVector& v,
                                                      std::uint64_t completion_seed) {
  if (std::abs(v.norm() - 1.0) > 1e-9 || v.minCoeff() < 0.0) {
    throw InvariantError("from_pure_state_oracle: need a normalized non-negative vector");
  }
  RealVector p = v.array().square();
  p /= p.sum();
  PurifiedOracle o = purify_classical(ClassicalDistribution(p), AncillaStyle::kCopy,
                                      completion_seed);
  return o;
}

PurifiedOracle mixture_oracle(const PurifiedOracle& o1, const PurifiedOracle& o2) {
  if (o1.db_ != o2.db_) throw InvariantError("mixture_oracle: B-register dimension mismatch");
  Index db = o1.db_;
  Index da_inner = std::max(o1.da_, o2.da_);
  PurifiedOracle o;
  o.da_ = 2 * da_inner;
  o.db_ = db;

  Matrix mix = (o1.source_density().matrix() + o2.source_density().matrix()) / 2.0;
  if (o1.classical() && o2.classical()) {
    RealVector p = (o1.classical_source().probs() + o2.classical_source().probs()) / 2.0;
    o.source_ = ClassicalDistribution(p);
  } else {
    o.source_ = DensityOperator(std::move(mix));
  }

  o.charges_ = {{o.counter_, 1}};
  for (const auto& e : o1.charges_) o.charges_.push_back(e);
  for (const auto& e : o2.charges_) o.charges_.push_back(e);

  auto pb1 = o1.purification_builder_;
  auto pb2 = o2.purification_builder_;
  Index da1 = o1.da_, da2 = o2.da_;
  o.purification_builder_ = [pb1, pb2, da1, da2, da_inner, db]() {
    Vector psi = Vector::Zero(checked_state_dim(2 * da_inner * db));
    Vector psi1 = pb1();
    Vector psi2 = pb2();
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Index a = 0; a < da1; ++a)
      for (Index b = 0; b < db; ++b) psi[a * db + b] = inv_sqrt2 * psi1[a * db + b];
    Index off = da_inner * db;  // coin = |1>
    for (Index a = 0; a < da2; ++a)
      for (Index b = 0; b < db; ++b) psi[off + a * db + b] = inv_sqrt2 * psi2[a * db + b];
    return psi;
  };
  auto ub1 = o1.unitary_builder_;
  auto ub2 = o2.unitary_builder_;
  o.unitary_builder_ = [ub1, ub2, da1, da2, da_inner, db]() {
    Index inner = da_inner * db;
    Matrix u1 = Matrix::Identity(inner, inner);
    u1.topLeftCorner(da1 * db, da1 * db) = ub1();
    Matrix u2 = Matrix::Identity(inner, inner);
    u2.topLeftCorner(da2 * db, da2 * db) = ub2();
    Matrix ctrl = Matrix::Zero(2 * inner, 2 * inner);
    ctrl.topLeftCorner(inner, inner) = u1;
    ctrl.bottomRightCorner(inner, inner) = u2;
    Matrix h(2, 2);
    double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return Matrix(ctrl * kron(h, Matrix::Identity(inner, inner)));
  };
  return o;
}

PurifiedOracle product_oracle(const PurifiedOracle& o, Index n, Index m) {
  if (o.db_ != n * m) throw InvariantError("product_oracle: B register does not factor as n x m");
  if (!o.classical()) {
    throw InvariantError("product_oracle: requires a classical source on [n]x[m]");
  }
  PurifiedOracle out;
  Index da = o.da_;
  out.da_ = da * m * da * n;
  out.db_ = n * m;
  out.source_ = product_of_marginals(o.classical_source(), n, m);
  out.charges_ = {{out.counter_, 1}};
  for (const auto& e : o.charges_) out.charges_.push_back({e.counter, e.weight * 2});

  auto pb = o.purification_builder_;
  out.purification_builder_ = [pb, da, n, m]() {
    // (U (x) U)|0> rearranged so B' = (i from copy 1, l from copy 2) and the
    // ancilla A' = (A1, j, A2, k); see docs/layout.md.
    Vector base = pb();
    checked_state_dim(da * m * da * n * n * m);
    Vector psi = Vector::Zero(da * m * da * n * n * m);
    for (Index a1 = 0; a1 < da; ++a1)
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j) {
          cxd amp1 = base[a1 * n * m + i * m + j];
          if (amp1 == cxd(0, 0)) continue;
          for (Index a2 = 0; a2 < da; ++a2)
            for (Index k = 0; k < n; ++k)
              for (Index l = 0; l < m; ++l) {
                cxd amp2 = base[a2 * n * m + k * m + l];
                if (amp2 == cxd(0, 0)) continue;
                Index anc = ((a1 * m + j) * da + a2) * n + k;
                Index sys = i * m + l;
                psi[anc * (n * m) + sys] = amp1 * amp2;
              }
        }
    return psi;
  };
  auto ub = o.unitary_builder_;
  out.unitary_builder_ = [ub, da, n, m]() -> Matrix {
    Index total = da * m * da * n * n * m;
    if (total > kMaxUnitaryDim) {
      throw InvariantError("product oracle unitary too large to materialize");
    }
    Matrix u = ub();
    Matrix uu = kron(u, u);
    // Permute tensor factors (A1, i, j, A2, k, l) -> (A1, j, A2, k | i, l).
    Matrix perm = Matrix::Zero(total, total);
    for (Index a1 = 0; a1 < da; ++a1)
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j)
          for (Index a2 = 0; a2 < da; ++a2)
            for (Index k = 0; k < n; ++k)
              for (Index l = 0; l < m; ++l) {
                Index src = ((((a1 * n + i) * m + j) * da + a2) * n + k) * m + l;
                Index anc = ((a1 * m + j) * da + a2) * n + k;
                Index dst = anc * (n * m) + i * m + l;
                perm(dst, src) = 1.0;
              }
    return Matrix(perm * uu * perm.adjoint());
  };
  return out;
}

}  // namespace qdpt

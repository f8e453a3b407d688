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

#include "qdpt/encoding.hpp"

#include <cmath>

#include "qdpt/generate.hpp"

namespace qdpt {

namespace {

constexpr Index kMaxFullDim = 1 << 12;

void check_full_dim(Index d, const char* what) {
  if (d > kMaxFullDim) {
    throw InvariantError(std::string(what) + ": full-space dimension too large (" +
                         std::to_string(d) + "); matrix mode is capped, use semantic mode");
  }
}

Matrix unit_basis(Index space, const std::vector<Index>& indices) {
  Matrix b = Matrix::Zero(space, static_cast<Index>(indices.size()));
  for (Index c = 0; c < static_cast<Index>(indices.size()); ++c) b(indices[c], c) = 1.0;
  return b;
}

// Hermitian PSD square root, eigenvalues clamped at zero.
Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  RealVector vals = es.eigenvalues();
  for (Index i = 0; i < vals.size(); ++i) vals[i] = std::sqrt(std::max(vals[i], 0.0));
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

ProjectedUnitaryEncoding::ProjectedUnitaryEncoding(std::function<Matrix()> unitary_builder,
                                                   Matrix left_basis, Matrix right_basis,
                                                   Matrix compact, int forward_cost,
                                                   int inverse_cost,
                                                   std::vector<ChargeEntry> charges,
                                                   Index space_dim)
    : ProjectedUnitaryEncoding(
          std::move(unitary_builder), [left_basis]() { return left_basis; },
          [right_basis]() { return right_basis; }, left_basis.cols(), right_basis.cols(),
          /*anc_zero_right=*/-1 != 0 ? false : false, std::move(compact), forward_cost,
          inverse_cost, std::move(charges), space_dim) {
  anc_zero_right_ = -1;  // unknown; computed on demand
}

ProjectedUnitaryEncoding::ProjectedUnitaryEncoding(
    std::function<Matrix()> unitary_builder, std::function<Matrix()> left_basis_builder,
    std::function<Matrix()> right_basis_builder, Index left_dim, Index right_dim,
    bool anc_zero_right, Matrix compact, int forward_cost, int inverse_cost,
    std::vector<ChargeEntry> charges, Index space_dim)
    : unitary_builder_(std::move(unitary_builder)),
      left_builder_(std::move(left_basis_builder)),
      right_builder_(std::move(right_basis_builder)),
      left_dim_(left_dim),
      right_dim_(right_dim),
      anc_zero_right_(anc_zero_right ? 1 : 0),
      compact_(std::move(compact)),
      compact_op_(compact_),
      forward_cost_(forward_cost),
      inverse_cost_(inverse_cost),
      charges_(std::move(charges)),
      space_dim_(space_dim) {
  if (compact_.rows() != left_dim_ || compact_.cols() != right_dim_) {
    throw InvariantError("encoding: compact matrix shape does not match bases");
  }
}

const Matrix& ProjectedUnitaryEncoding::left_basis() const {
  if (left_cache_->size() == 0) {
    if (space_dim_ * left_dim_ > (Index{1} << 24)) {
      throw InvariantError("left basis too large to materialize");
    }
    *left_cache_ = left_builder_();
  }
  return *left_cache_;
}

const Matrix& ProjectedUnitaryEncoding::right_basis() const {
  if (right_cache_->size() == 0) {
    if (space_dim_ * right_dim_ > (Index{1} << 24)) {
      throw InvariantError("right basis too large to materialize");
    }
    *right_cache_ = right_builder_();
  }
  return *right_cache_;
}

Operator ProjectedUnitaryEncoding::encoded() const {
  check_full_dim(space_dim_, "encoded");
  return Operator(left_basis() * compact_ * right_basis().adjoint());
}

void ProjectedUnitaryEncoding::charge_uses(std::uint64_t u_uses, std::uint64_t udag_uses,
                                           std::uint64_t refl) const {
  // One U application costs forward_cost_ forward and inverse_cost_ inverse
  // oracle calls; a U^dagger application swaps the two.
  std::uint64_t fwd = u_uses * forward_cost_ + udag_uses * inverse_cost_;
  std::uint64_t inv = u_uses * inverse_cost_ + udag_uses * forward_cost_;
  for (const auto& e : charges_) {
    e.counter->charge(e.weight * fwd, e.weight * inv, e.weight * refl);
  }
}

ProjectedUnitaryEncoding ProjectedUnitaryEncoding::adjoint() const {
  auto ub = unitary_builder_;
  return ProjectedUnitaryEncoding([ub]() { return Matrix(ub().adjoint()); }, right_builder_,
                                  left_builder_, right_dim_, left_dim_, false,
                                  Matrix(compact_.adjoint()), inverse_cost_, forward_cost_,
                                  charges_, space_dim_);
}

bool ProjectedUnitaryEncoding::right_projector_is_anc_zero() const {
  if (anc_zero_right_ >= 0) return anc_zero_right_ != 0;
  const Matrix& rb = right_basis();
  for (Index c = 0; c < rb.cols(); ++c) {
    for (Index rix = 0; rix < rb.rows(); ++rix) {
      cxd want = (rix == c) ? cxd(1.0, 0.0) : cxd(0.0, 0.0);
      if (std::abs(rb(rix, c) - want) > 1e-12) return false;
    }
  }
  return true;
}

namespace {
std::function<Matrix()> unit_basis_builder(Index space, std::vector<Index> indices) {
  return [space, indices = std::move(indices)]() { return unit_basis(space, indices); };
}
std::vector<Index> leading_indices(Index n) {
  std::vector<Index> ix(n);
  for (Index i = 0; i < n; ++i) ix[i] = i;
  return ix;
}
}  // namespace

BlockEncoding::BlockEncoding(std::function<Matrix()> unitary_builder, Matrix block,
                             Index ancilla_dim, int forward_cost, int inverse_cost,
                             std::vector<ChargeEntry> charges)
    : ProjectedUnitaryEncoding(
          std::move(unitary_builder),
          unit_basis_builder(ancilla_dim * block.rows(), leading_indices(block.rows())),
          unit_basis_builder(ancilla_dim * block.rows(), leading_indices(block.rows())),
          block.rows(), block.rows(), /*anc_zero_right=*/true, block, forward_cost,
          inverse_cost, std::move(charges), ancilla_dim * block.rows()),
      ancilla_dim_(ancilla_dim),
      block_dim_(block.rows()) {}

ProjectedUnitaryEncoding classical_sqrt_encoding(const PurifiedOracle& o) {
  if (!o.classical()) {
    throw InvariantError("classical_sqrt_encoding: oracle must serve a classical distribution");
  }
  Index da = o.ancilla_dim(), n = o.system_dim();
  Index space = da * n * n;
  RealVector p = o.source_probs();
  Matrix phi = o.ancilla_states();  // da x n, column i = |phi_i> (zero when p_i = 0)

  // Left basis: |a, i, i> for a in [dA], i in [n]; right basis: |0, 0, c>.
  std::vector<Index> left_ix(da * n), right_ix(n);
  for (Index a = 0; a < da; ++a)
    for (Index i = 0; i < n; ++i) left_ix[a * n + i] = (a * n + i) * n + i;
  for (Index c = 0; c < n; ++c) right_ix[c] = c;

  Matrix compact = Matrix::Zero(da * n, n);
  for (Index c = 0; c < n; ++c) {
    double amp = std::sqrt(p[c]);
    if (amp == 0.0) continue;
    for (Index a = 0; a < da; ++a) compact(a * n + c, c) = amp * phi(a, c);
  }

  auto ub = [o]() {
    Index n2 = o.system_dim();
    check_full_dim(o.total_dim() * n2, "classical_sqrt_encoding unitary");
    return kron(o.unitary(), Matrix::Identity(n2, n2));
  };
  return ProjectedUnitaryEncoding(ub, unit_basis_builder(space, std::move(left_ix)),
                                  unit_basis_builder(space, std::move(right_ix)), da * n, n,
                                  /*anc_zero_right=*/true, std::move(compact), /*forward=*/1,
                                  /*inverse=*/0, o.charges(), space);
}

ProjectedUnitaryEncoding density_sqrt_encoding(const PurifiedOracle& o) {
  Index da = o.ancilla_dim(), n = o.system_dim();
  if (da != n) {
    throw InvariantError("density_sqrt_encoding: requires ancilla_dim == system_dim");
  }
  Index space = da * da * n;

  // A' = sum_i sqrt(p_i/n) |conj(phi_i), 0, 0><0, 0, psi_i|; the compact
  // matrix is conj(purification)/sqrt(n) read as a (dA x n) matrix.
  const Vector& psi = o.purification();
  Matrix compact(da, n);
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index a = 0; a < da; ++a)
    for (Index b = 0; b < n; ++b) compact(a, b) = std::conj(psi[a * n + b]) * scale;

  std::vector<Index> left_ix(da), right_ix(n);
  for (Index a = 0; a < da; ++a) left_ix[a] = a * da * n;  // |a, 0, 0>
  for (Index b = 0; b < n; ++b) right_ix[b] = b;           // |0, 0, b>

  auto ub = [o]() {
    Index d = o.ancilla_dim(), n2 = o.system_dim();
    check_full_dim(d * d * n2, "density_sqrt_encoding unitary");
    // W|0,0> = sum_j |j,j>/sqrt(d) on R1 (x) R2, completed arbitrarily.
    Vector omega = Vector::Zero(d * d);
    for (Index j = 0; j < d; ++j) omega[j * d + j] = 1.0 / std::sqrt(static_cast<double>(d));
    Matrix w = complete_unitary(omega);
    Matrix u = o.unitary();
    return Matrix(kron(Matrix::Identity(d, d), u.adjoint()) *
                  kron(w, Matrix::Identity(n2, n2)));
  };
  return ProjectedUnitaryEncoding(ub, unit_basis_builder(space, std::move(left_ix)),
                                  unit_basis_builder(space, std::move(right_ix)), da, n,
                                  /*anc_zero_right=*/true, std::move(compact), /*forward=*/0,
                                  /*inverse=*/1, o.charges(), space);
}

BlockEncoding block_encode_density(const PurifiedOracle& o) {
  Index da = o.ancilla_dim(), n = o.system_dim();
  Matrix rho = o.source_density().matrix();

  auto ub = [o]() {
    Index d = o.ancilla_dim(), n2 = o.system_dim();
    Index space = d * n2 * n2;
    check_full_dim(space, "block_encode_density unitary");
    Matrix u = o.unitary();
    Matrix swap = Matrix::Zero(n2 * n2, n2 * n2);
    for (Index b = 0; b < n2; ++b)
      for (Index bp = 0; bp < n2; ++bp) swap(bp * n2 + b, b * n2 + bp) = 1.0;
    Matrix step1 = kron(u, Matrix::Identity(n2, n2));
    Matrix step2 = kron(Matrix::Identity(d, d), swap);
    return Matrix(step1.adjoint() * step2 * step1);
  };
  return BlockEncoding(ub, std::move(rho), /*ancilla_dim=*/da * n, /*forward=*/1, /*inverse=*/1,
                       o.charges());
}

BlockEncoding half_difference(const BlockEncoding& b1, const BlockEncoding& b2) {
  if (b1.block_dim() != b2.block_dim()) {
    throw InvariantError("half_difference: block dimension mismatch");
  }
  Index n = b1.block_dim();
  Index anc = std::max(b1.ancilla_dim(), b2.ancilla_dim());
  Matrix block = (b1.block() - b2.block()) / 2.0;

  std::vector<ChargeEntry> charges;
  charges.reserve(b1.charges().size() + b2.charges().size());
  for (const auto& e : b1.charges()) charges.push_back(e);
  for (const auto& e : b2.charges()) charges.push_back(e);

  BlockEncoding be1 = b1, be2 = b2;
  auto ub = [be1, be2, anc, n]() {
    Index inner = anc * n;
    check_full_dim(2 * inner, "half_difference unitary");
    Matrix u1 = Matrix::Identity(inner, inner);
    u1.topLeftCorner(be1.space_dim(), be1.space_dim()) = be1.unitary();
    Matrix u2 = Matrix::Identity(inner, inner);
    u2.topLeftCorner(be2.space_dim(), be2.space_dim()) = be2.unitary();
    Matrix ctrl = Matrix::Zero(2 * inner, 2 * inner);
    ctrl.topLeftCorner(inner, inner) = u1;
    ctrl.bottomRightCorner(inner, inner) = -u2;
    Matrix h(2, 2);
    double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    Matrix hh = kron(h, Matrix::Identity(inner, inner));
    return Matrix(hh * ctrl * hh);
  };
  return BlockEncoding(ub, std::move(block), 2 * anc,
                       b1.forward_cost() + b2.forward_cost(),
                       b1.inverse_cost() + b2.inverse_cost(), std::move(charges));
}

BlockEncoding gram_square(const ProjectedUnitaryEncoding& e) {
  if (!e.right_projector_is_anc_zero()) {
    throw InvariantError("gram_square: right projector must have the |0><0| (x) I form");
  }
  Matrix m = e.compact().adjoint() * e.compact();
  m = ((m + m.adjoint()) / 2.0).eval();
  Index n = m.rows();

  Matrix block = m;
  auto ub = [m, n]() {
    check_full_dim(2 * n, "gram_square unitary");
    Matrix s = psd_sqrt(Matrix::Identity(n, n) - m * m);
    Matrix u(2 * n, 2 * n);
    u.topLeftCorner(n, n) = m;
    u.topRightCorner(n, n) = s;
    u.bottomLeftCorner(n, n) = s;
    u.bottomRightCorner(n, n) = -m;
    return u;
  };
  // Realized by the degree-2 transform x^2: two uses of U per application.
  return BlockEncoding(ub, std::move(block), /*ancilla_dim=*/2,
                       e.forward_cost() + e.inverse_cost(),
                       e.forward_cost() + e.inverse_cost(), e.charges());
}

ProjectedUnitaryEncoding random_projected_encoding(Index dim, Index left_rank, Index right_rank,
                                                   std::uint64_t seed) {
  if (left_rank > dim || right_rank > dim || left_rank < 1 || right_rank < 1) {
    throw InvariantError("random_projected_encoding: invalid ranks");
  }
  Matrix u = haar_random_unitary(dim, seed);
  Matrix lb = haar_random_unitary(dim, seed ^ 0x9e3779b97f4a7c15ULL).leftCols(left_rank);
  Matrix rb = haar_random_unitary(dim, seed + 0x12345).leftCols(right_rank);
  Matrix compact = lb.adjoint() * u * rb;
  auto ub = [u]() { return u; };
  return ProjectedUnitaryEncoding(ub, lb, rb, std::move(compact), 1, 0,
                                  {{std::make_shared<QueryCounter>(), 1}}, dim);
}

ProjectedUnitaryEncoding negated(const ProjectedUnitaryEncoding& e) {
  ProjectedUnitaryEncoding copy = e;
  auto ub = [copy]() { return Matrix(-copy.unitary()); };
  return ProjectedUnitaryEncoding(ub, e.left_basis(), e.right_basis(), Matrix(-e.compact()),
                                  e.forward_cost(), e.inverse_cost(), e.charges(), e.space_dim());
}

}  // namespace qdpt

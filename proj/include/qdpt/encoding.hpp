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

#ifndef QDPT_ENCODING_HPP_
#define QDPT_ENCODING_HPP_

#include <functional>
#include <string>

#include "qdpt/oracle.hpp"

namespace qdpt {

/// A matrix represented as A = Pi U Pi~ for a unitary U and orthogonal
/// projectors Pi (output side) and Pi~ (input side). We store orthonormal
/// bases of the projector images, plus the compact matrix
/// left_basis^dagger U right_basis; the full-space objects are materialized
/// lazily and only at matrix-mode sizes. Orientation conventions live in
/// docs/layout.md.
///
/// queries_per_use is symbolic: compositions add it rather than recompute
/// it from structure, which keeps complexity accounting exact.
class ProjectedUnitaryEncoding {
 public:
  /// Dense-basis constructor (testing helpers, small spaces).
  ProjectedUnitaryEncoding(std::function<Matrix()> unitary_builder, Matrix left_basis,
                           Matrix right_basis, Matrix compact, int forward_cost, int inverse_cost,
                           std::vector<ChargeEntry> charges, Index space_dim);
  /// Lazy-basis constructor: projector image bases materialize on demand
  /// (they can be huge at semantic-mode sizes while the compact matrix stays
  /// small). anc_zero_right marks the |0...0><0...0| (x) I right-projector
  /// form without materializing anything.
  ProjectedUnitaryEncoding(std::function<Matrix()> unitary_builder,
                           std::function<Matrix()> left_basis_builder,
                           std::function<Matrix()> right_basis_builder, Index left_dim,
                           Index right_dim, bool anc_zero_right, Matrix compact, int forward_cost,
                           int inverse_cost, std::vector<ChargeEntry> charges, Index space_dim);

  Index space_dim() const { return space_dim_; }
  Index left_dim() const { return left_dim_; }
  Index right_dim() const { return right_dim_; }

  /// left_basis^dagger U right_basis; carries all singular data of A.
  const Matrix& compact() const { return compact_; }
  const Operator& compact_operator() const { return compact_op_; }
  /// Singular values of the encoded operator, non-increasing.
  const RealVector& singular_values() const { return compact_op_.singular_values(); }

  // Materialized on demand; size-guarded.
  const Matrix& left_basis() const;
  const Matrix& right_basis() const;

  // Full-space views; size-guarded, intended for tests and matrix mode.
  Matrix unitary() const { return unitary_builder_(); }
  Matrix projector_left() const { return left_basis() * left_basis().adjoint(); }
  Matrix projector_right() const { return right_basis() * right_basis().adjoint(); }
  /// A = Pi U Pi~ as a full-space Operator.
  Operator encoded() const;

  int forward_cost() const { return forward_cost_; }
  int inverse_cost() const { return inverse_cost_; }
  /// Oracle calls consumed by one application of U (forward + inverse).
  int queries_per_use() const { return forward_cost_ + inverse_cost_; }

  const std::vector<ChargeEntry>& charges() const { return charges_; }
  /// Charges u_uses applications of U and udag_uses of U^dagger, plus
  /// controlled reflections, to the underlying oracle counters.
  void charge_uses(std::uint64_t u_uses, std::uint64_t udag_uses, std::uint64_t refl = 0) const;

  /// The encoding of A^dagger (U -> U^dagger, projectors swapped).
  ProjectedUnitaryEncoding adjoint() const;

  /// True when Pi~ has the form |0...0><0...0| (x) I with the identity on the
  /// trailing register, i.e. right basis columns are the first computational
  /// basis vectors.
  bool right_projector_is_anc_zero() const;

 private:
  std::function<Matrix()> unitary_builder_;
  std::function<Matrix()> left_builder_, right_builder_;
  Index left_dim_ = 0, right_dim_ = 0;
  int anc_zero_right_ = -1;  // -1 unknown, else bool
  mutable std::shared_ptr<Matrix> left_cache_ = std::make_shared<Matrix>();
  mutable std::shared_ptr<Matrix> right_cache_ = std::make_shared<Matrix>();
  Matrix compact_;
  Operator compact_op_;
  int forward_cost_, inverse_cost_;
  std::vector<ChargeEntry> charges_;
  Index space_dim_;
};

/// Projected unitary encoding with Pi = Pi~ = |0...0><0...0| (x) I; the
/// encoded operator sits in the top-left block of the unitary. The ancilla
/// is a dimension-`ancilla_dim` register (a flattened qubit count when the
/// dimension is a power of two).
class BlockEncoding : public ProjectedUnitaryEncoding {
 public:
  BlockEncoding(std::function<Matrix()> unitary_builder, Matrix block, Index ancilla_dim,
                int forward_cost, int inverse_cost, std::vector<ChargeEntry> charges);

  Index ancilla_dim() const { return ancilla_dim_; }
  Index block_dim() const { return block_dim_; }
  const Matrix& block() const { return compact(); }

 private:
  Index ancilla_dim_, block_dim_;
};

/// Encoding of sum_i sqrt(p_i) |phi_i><0| (x) |i><0| (x) |i><i| built from a
/// purified oracle of a classical distribution; singular values are exactly
/// {sqrt(p_i)}. Registers (A, B, C) with C an extra copy of the system.
ProjectedUnitaryEncoding classical_sqrt_encoding(const PurifiedOracle& o);

/// Encoding with singular values {sqrt(p_i / n)} built from a purified
/// oracle of a density operator via the maximally entangled preparer W.
/// Registers (R1, R2, R3) = (C^dA, C^dA, C^n); requires dA == n.
ProjectedUnitaryEncoding density_sqrt_encoding(const PurifiedOracle& o);

/// Block-encoding of rho itself, two oracle queries per use.
BlockEncoding block_encode_density(const PurifiedOracle& o);

/// Block-encoding of (rho - sigma)/2 via one extra control qubit; query
/// cost adds.
BlockEncoding half_difference(const BlockEncoding& b1, const BlockEncoding& b2);

/// Block-encoding of A^dagger A for an encoding with Pi~ = |0><0| (x) I
/// (the singular value transform by x^2).
BlockEncoding gram_square(const ProjectedUnitaryEncoding& e);

/// Random dense encoding (Haar U, Haar-random projector bases); testing
/// helper used by the oracle-equivalence suites.
ProjectedUnitaryEncoding random_projected_encoding(Index dim, Index left_rank, Index right_rank,
                                                   std::uint64_t seed);

/// Same encoding with the unitary negated (encodes -A); testing helper.
ProjectedUnitaryEncoding negated(const ProjectedUnitaryEncoding& e);

}  // namespace qdpt

#endif  // QDPT_ENCODING_HPP_

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

#ifndef QDPT_TYPES_HPP_
#define QDPT_TYPES_HPP_

#include <memory>
#include <mutex>
#include <vector>

#include "qdpt/common.hpp"

namespace qdpt {

/// Probability vector p over [n]. Immutable after construction; entries are
/// validated to be non-negative and to sum to 1 within 1e-12.
class ClassicalDistribution {
 public:
  explicit ClassicalDistribution(RealVector probs);

  Index size() const { return probs_.size(); }
  double operator[](Index i) const { return probs_[i]; }
  const RealVector& probs() const { return probs_; }

 private:
  RealVector probs_;
};

/// n x n PSD trace-1 complex matrix. Hermiticity and unit trace are checked
/// to 1e-12 at construction; eigenvalues in [-1e-12, 0] are clamped to zero,
/// anything more negative is rejected as a malformed input.
///
/// The eigendecomposition (eigenvalues descending) is computed on first use
/// and cached; instances are immutable and safe to share across threads.
class DensityOperator {
 public:
  explicit DensityOperator(Matrix matrix);

  Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

  /// Eigenvalues in descending order, clamped to [0, 1].
  const RealVector& eigenvalues() const;
  /// Unit eigenvectors as columns, matching eigenvalues() order.
  const Matrix& eigenvectors() const;

 private:
  struct EigCache {
    std::once_flag once;
    RealVector values;
    Matrix vectors;
  };
  void ensure_eig() const;

  Matrix matrix_;
  std::shared_ptr<EigCache> eig_ = std::make_shared<EigCache>();
};

/// Normalized state vector over a list of registers. register_dims()[0] is
/// the leftmost (most significant) tensor factor, matching Eigen's kron
/// ordering; see docs/layout.md.
class PureState {
 public:
  PureState(Vector amplitudes, std::vector<Index> register_dims);

  const Vector& amplitudes() const { return amplitudes_; }
  const std::vector<Index>& register_dims() const { return register_dims_; }
  Index dim() const { return amplitudes_.size(); }
  Index num_registers() const { return static_cast<Index>(register_dims_.size()); }

 private:
  Vector amplitudes_;
  std::vector<Index> register_dims_;
};

/// Rectangular complex matrix with a lazily computed thin SVD cache
/// (singular values non-increasing). The cache reconstructs the matrix to
/// 1e-10 in Frobenius norm; this is asserted in tests, not at runtime.
class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix matrix);

  const Matrix& matrix() const { return matrix_; }
  Index rows() const { return matrix_.rows(); }
  Index cols() const { return matrix_.cols(); }

  const RealVector& singular_values() const;
  /// Left singular vectors (columns), matrix = left * diag(s) * right^dagger.
  const Matrix& left_vectors() const;
  const Matrix& right_vectors() const;

 private:
  struct SvdCache {
    std::once_flag once;
    RealVector values;
    Matrix left;
    Matrix right;
  };
  void ensure_svd() const;

  Matrix matrix_;
  std::shared_ptr<SvdCache> svd_ = std::make_shared<SvdCache>();
};

/// -sum p_i ln p_i in nats, with 0 ln 0 := 0. Ground truth for the testers.
double shannon_entropy(const ClassicalDistribution& d);

/// -sum p_i ln p_i over the spectrum, in nats. Eigenvalues below 1e-14
/// contribute zero. Shares the spectral code path with shannon_entropy.
double von_neumann_entropy(const DensityOperator& rho);

/// Schatten alpha-norm of A - B, (sum_i s_i^alpha)^(1/alpha) over singular
/// values. For diagonal inputs this equals the classical vector norm.
double schatten_distance(const DensityOperator& a, const DensityOperator& b, double alpha);

/// Same norm on a raw operator difference; used internally by testers.
double schatten_norm(const Matrix& m, double alpha);

/// Traces out one register of a pure state, returning the density operator
/// on the remaining registers (ordering preserved).
DensityOperator partial_trace(const PureState& s, Index traced_register);

// Small shared helpers.
double entropy_of_spectrum(const RealVector& probs);
bool is_hermitian(const Matrix& m, double tol);
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron_vec(const Vector& a, const Vector& b);
Vector basis_vector(Index dim, Index i);

/// Applies `op` to one register of `state` (identity on the others).
Vector apply_to_register(const Matrix& op, const Vector& state,
                         const std::vector<Index>& dims, Index reg);

}  // namespace qdpt

#endif  // QDPT_TYPES_HPP_

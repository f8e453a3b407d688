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

#include "qdpt/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qdpt {

ClassicalDistribution::ClassicalDistribution(RealVector probs) : probs_(std::move(probs)) {
  if (probs_.size() < 1) {
    throw InvariantError("distribution must have n >= 1");
  }
  for (Index i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0)) {
      throw InvariantError("distribution entries must be non-negative");
    }
  }
  double sum = probs_.sum();
  if (std::abs(sum - 1.0) > kSumTol) {
    throw InvariantError("distribution entries must sum to 1 within 1e-12, got " +
                         std::to_string(sum));
  }
}

DensityOperator::DensityOperator(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw InvariantError("density operator must be a square matrix");
  }
  if (!is_hermitian(matrix_, kHermTol)) {
    throw InvariantError("density operator must be Hermitian to 1e-12");
  }
  double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kSumTol) {
    throw InvariantError("density operator trace must be 1 within 1e-12, got " +
                         std::to_string(tr));
  }
  // PSD check happens in ensure_eig(); do it now so invalid inputs fail fast.
  ensure_eig();
}

void DensityOperator::ensure_eig() const {
  std::call_once(eig_->once, [this] {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_);
    RealVector vals = solver.eigenvalues();
    Matrix vecs = solver.eigenvectors();
    // Solver returns ascending order; flip to descending.
    vals.reverseInPlace();
    eig_->vectors = vecs.rowwise().reverse();
    for (Index i = 0; i < vals.size(); ++i) {
      if (vals[i] < -kEigClampTol) {
        throw InvariantError("density operator has eigenvalue " + std::to_string(vals[i]) +
                             " below -1e-12");
      }
      vals[i] = std::max(vals[i], 0.0);
    }
    eig_->values = std::move(vals);
  });
}

const RealVector& DensityOperator::eigenvalues() const {
  ensure_eig();
  return eig_->values;
}

const Matrix& DensityOperator::eigenvectors() const {
  ensure_eig();
  return eig_->vectors;
}

PureState::PureState(Vector amplitudes, std::vector<Index> register_dims)
    : amplitudes_(std::move(amplitudes)), register_dims_(std::move(register_dims)) {
  Index prod = 1;
  for (Index d : register_dims_) {
    if (d < 1) throw InvariantError("register dimensions must be >= 1");
    prod *= d;
  }
  if (prod != amplitudes_.size()) {
    throw InvariantError("product of register dims must equal amplitude length");
  }
  double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kSumTol) {
    throw InvariantError("pure state must be normalized within 1e-12, got norm " +
                         std::to_string(norm));
  }
}

Operator::Operator(Matrix matrix) : matrix_(std::move(matrix)) {}

void Operator::ensure_svd() const {
  std::call_once(svd_->once, [this] {
    Eigen::JacobiSVD<Matrix> svd(matrix_, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd_->values = svd.singularValues();
    svd_->left = svd.matrixU();
    svd_->right = svd.matrixV();
  });
}

const RealVector& Operator::singular_values() const {
  ensure_svd();
  return svd_->values;
}

const Matrix& Operator::left_vectors() const {
  ensure_svd();
  return svd_->left;
}

const Matrix& Operator::right_vectors() const {
  ensure_svd();
  return svd_->right;
}

double entropy_of_spectrum(const RealVector& probs) {
  double h = 0.0;
  for (Index i = 0; i < probs.size(); ++i) {
    double p = probs[i];
    if (p > 1e-14) h -= p * std::log(p);
  }
  return h;
}

double shannon_entropy(const ClassicalDistribution& d) { return entropy_of_spectrum(d.probs()); }

double von_neumann_entropy(const DensityOperator& rho) {
  return entropy_of_spectrum(rho.eigenvalues());
}

double schatten_norm(const Matrix& m, double alpha) {
  if (alpha < 1.0) throw InvariantError("Schatten norm requires alpha >= 1");
  Eigen::JacobiSVD<Matrix> svd(m);
  const RealVector& s = svd.singularValues();
  double acc = 0.0;
  for (Index i = 0; i < s.size(); ++i) acc += std::pow(s[i], alpha);
  return std::pow(acc, 1.0 / alpha);
}

double schatten_distance(const DensityOperator& a, const DensityOperator& b, double alpha) {
  if (a.dim() != b.dim()) throw InvariantError("schatten_distance: dimension mismatch");
  return schatten_norm(a.matrix() - b.matrix(), alpha);
}

DensityOperator partial_trace(const PureState& s, Index traced_register) {
  const auto& dims = s.register_dims();
  if (traced_register < 0 || traced_register >= s.num_registers()) {
    throw InvariantError("partial_trace: invalid register index");
  }
  Index dl = 1, dr = 1;
  for (Index r = 0; r < traced_register; ++r) dl *= dims[r];
  for (Index r = traced_register + 1; r < s.num_registers(); ++r) dr *= dims[r];
  Index dt = dims[traced_register];
  Index keep = dl * dr;

  const Vector& psi = s.amplitudes();
  Matrix rho = Matrix::Zero(keep, keep);
  for (Index l = 0; l < dl; ++l) {
    for (Index lp = 0; lp < dl; ++lp) {
      for (Index t = 0; t < dt; ++t) {
        for (Index r = 0; r < dr; ++r) {
          cxd left = psi[(l * dt + t) * dr + r];
          if (left == cxd(0.0, 0.0)) continue;
          for (Index rp = 0; rp < dr; ++rp) {
            rho(l * dr + r, lp * dr + rp) += left * std::conj(psi[(lp * dt + t) * dr + rp]);
          }
        }
      }
    }
  }
  // Symmetrize away roundoff before the constructor's Hermiticity check.
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return DensityOperator(std::move(rho));
}

bool is_hermitian(const Matrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

Vector basis_vector(Index dim, Index i) {
  Vector v = Vector::Zero(dim);
  v[i] = 1.0;
  return v;
}

Vector apply_to_register(const Matrix& op, const Vector& state, const std::vector<Index>& dims,
                         Index reg) {
  Index dl = 1, dr = 1;
  for (Index r = 0; r < reg; ++r) dl *= dims[r];
  for (Index r = reg + 1; r < static_cast<Index>(dims.size()); ++r) dr *= dims[r];
  Index dt = dims[reg];
  if (op.rows() != dt || op.cols() != dt || dl * dt * dr != state.size()) {
    throw InvariantError("apply_to_register: dimension mismatch");
  }
  Vector out = Vector::Zero(state.size());
  for (Index l = 0; l < dl; ++l) {
    for (Index r = 0; r < dr; ++r) {
      for (Index i = 0; i < dt; ++i) {
        cxd acc(0.0, 0.0);
        for (Index j = 0; j < dt; ++j) acc += op(i, j) * state[(l * dt + j) * dr + r];
        out[(l * dt + i) * dr + r] = acc;
      }
    }
  }
  return out;
}

}  // namespace qdpt

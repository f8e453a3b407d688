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

#include "qdpt/svt.hpp"

#include <cmath>

namespace qdpt {

void TransformedMap::charge_applications(std::uint64_t uses) const {
  // Alternating circuit: ceil(deg/2) uses of U and floor(deg/2) of U^dagger
  // per application, plus deg controlled reflections.
  std::uint64_t u_uses = (static_cast<std::uint64_t>(degree) + 1) / 2 * uses;
  std::uint64_t udag_uses = static_cast<std::uint64_t>(degree) / 2 * uses;
  std::uint64_t fwd = u_uses * encoding_forward_cost + udag_uses * encoding_inverse_cost;
  std::uint64_t inv = u_uses * encoding_inverse_cost + udag_uses * encoding_forward_cost;
  std::uint64_t refl = static_cast<std::uint64_t>(degree) * uses;
  for (const auto& e : charges) e.counter->charge(e.weight * fwd, e.weight * inv, e.weight * refl);
}

TransformedMap apply_svt(const ProjectedUnitaryEncoding& e, const ApproxPolynomial& p) {
  if (p.parity() == Parity::kNone) {
    throw InvariantError("apply_svt: polynomial must have definite parity");
  }
  if (p.certificate().grid_points == 0) {
    throw InvariantError("apply_svt: polynomial carries no certificate");
  }
  if (p.certificate().max_abs_on_unit > 1.0 + 1e-9) {
    throw InvariantError("apply_svt: polynomial is not bounded by 1 on [-1, 1]");
  }

  const Operator& op = e.compact_operator();
  const RealVector& s = op.singular_values();
  const Matrix& u = op.left_vectors();
  const Matrix& v = op.right_vectors();

  TransformedMap out;
  out.parity = p.parity();
  out.degree = p.degree();
  out.space_dim = e.space_dim();
  out.charges = e.charges();
  out.encoding_forward_cost = e.forward_cost();
  out.encoding_inverse_cost = e.inverse_cost();
  out.query_cost_per_use =
      static_cast<std::uint64_t>(p.degree()) * static_cast<std::uint64_t>(e.queries_per_use());
  out.reflection_cost_per_use = static_cast<std::uint64_t>(p.degree());

  RealVector ps(s.size());
  for (Index i = 0; i < s.size(); ++i) ps[i] = p(s[i]);

  ProjectedUnitaryEncoding enc = e;
  if (p.parity() == Parity::kOdd) {
    out.compact = u * ps.asDiagonal() * v.adjoint();
    out.out_basis_builder = [enc]() { return enc.left_basis(); };
    out.in_basis_builder = [enc]() { return enc.right_basis(); };
  } else {
    // Even case lives on the input projector space; singular values are
    // zero-padded when the input dimension exceeds min(d, d~).
    Index di = e.right_dim();
    double p0 = p(0.0);
    Matrix m = v * ps.asDiagonal() * v.adjoint();
    if (v.cols() < di) {
      m += p0 * (Matrix::Identity(di, di) - v * v.adjoint());
    }
    out.compact = std::move(m);
    out.out_basis_builder = [enc]() { return enc.right_basis(); };
    out.in_basis_builder = [enc]() { return enc.right_basis(); };
  }
  return out;
}

Matrix svt_reference(const ProjectedUnitaryEncoding& e, const ApproxPolynomial& p) {
  Matrix a = e.encoded().matrix();
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  Index d = a.rows();
  Matrix out = Matrix::Zero(d, d);
  if (p.parity() == Parity::kOdd) {
    for (Index i = 0; i < s.size(); ++i) {
      if (s[i] <= 1e-12) continue;  // odd polynomials vanish at 0
      out += p(s[i]) * svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
    }
  } else {
    // sum over nonzero singular directions plus P(0) on the remainder of
    // the input projector image.
    Matrix pr = e.projector_right();
    Matrix nonzero = Matrix::Zero(d, d);
    for (Index i = 0; i < s.size(); ++i) {
      if (s[i] <= 1e-12) continue;
      out += p(s[i]) * svd.matrixV().col(i) * svd.matrixV().col(i).adjoint();
      nonzero += Matrix(svd.matrixV().col(i) * svd.matrixV().col(i).adjoint());
    }
    out += p(0.0) * (pr - nonzero);
  }
  return out;
}

PureState apply_with_flag(const Matrix& m, const PureState& s, Index acting_register) {
  const auto& dims = s.register_dims();
  if (acting_register < 0 || acting_register >= s.num_registers()) {
    throw InvariantError("apply_with_flag: invalid register index");
  }
  Vector good = apply_to_register(m, s.amplitudes(), dims, acting_register);

  // Garbage branch from the canonical dilation: sqrt(I - M^dagger M).
  Matrix gram = Matrix::Identity(m.cols(), m.cols()) - m.adjoint() * m;
  gram = ((gram + gram.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  RealVector vals = es.eigenvalues();
  if (vals.minCoeff() < -1e-6) {
    throw InvariantError("apply_with_flag: map is not a contraction");
  }
  // Clamping below the roundoff floor keeps exactly-unitary maps from
  // leaking sqrt(eps)-sized garbage amplitudes.
  for (Index i = 0; i < vals.size(); ++i) {
    vals[i] = (vals[i] < 1e-13) ? 0.0 : std::sqrt(vals[i]);
  }
  Matrix rest = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
  Vector bad = apply_to_register(rest, s.amplitudes(), dims, acting_register);

  Index n = s.dim();
  Vector out(2 * n);
  for (Index i = 0; i < n; ++i) {
    out[2 * i] = good[i];
    out[2 * i + 1] = bad[i];
  }
  // Dilation output is exactly normalized up to roundoff.
  out /= out.norm();
  std::vector<Index> new_dims = dims;
  new_dims.push_back(2);
  return PureState(std::move(out), std::move(new_dims));
}

PureState apply_to_state(const TransformedMap& m, const PureState& s, Index acting_register) {
  return apply_with_flag(m.full(), s, acting_register);
}

}  // namespace qdpt

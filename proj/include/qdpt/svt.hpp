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

#ifndef QDPT_SVT_HPP_
#define QDPT_SVT_HPP_

#include "qdpt/encoding.hpp"
#include "qdpt/poly.hpp"

namespace qdpt {

/// The singular value transform of an encoded operator A = sum_i s_i
/// |left_i><right_i|:
///   odd  P: sum_i P(s_i) |left_i><right_i|  (image side x input side)
///   even P: sum_i P(s_i) |right_i><right_i| on the full input projector
///           space, singular values padded with zeros when the input
///           dimension exceeds the rank side.
///
/// The operator is stored compactly against the encoding's projector bases;
/// full() materializes the full-space matrix (matrix-mode sizes only).
/// Query accounting follows the alternating-circuit cost model: degree uses
/// of U / U^dagger plus the same number of controlled reflections.
struct TransformedMap {
  Matrix compact;  // out_dim x in_dim, against the projector image bases
  std::function<Matrix()> out_basis_builder;  // space_dim x out_dim, lazy
  std::function<Matrix()> in_basis_builder;   // space_dim x in_dim, lazy
  Parity parity = Parity::kNone;
  int degree = 0;
  std::uint64_t query_cost_per_use = 0;       // degree * queries_per_use
  std::uint64_t reflection_cost_per_use = 0;  // degree
  Index space_dim = 0;
  std::vector<ChargeEntry> charges;
  int encoding_forward_cost = 0, encoding_inverse_cost = 0;

  /// Full-space operator; materializes the bases (matrix-mode sizes only).
  Matrix full() const { return out_basis_builder() * compact * in_basis_builder().adjoint(); }
  /// Charges `uses` applications of the transformed map (each one costs
  /// `degree` alternating U / U^dagger calls plus reflections).
  void charge_applications(std::uint64_t uses) const;
};

/// Applies the polynomial singular value transform to an encoding.
/// P must have definite parity and a certificate with |P| <= 1 on [-1,1].
TransformedMap apply_svt(const ProjectedUnitaryEncoding& e, const ApproxPolynomial& p);

/// Brute-force reference: full SVD of the encoded full-space matrix, map
/// the singular values, add the even-case zero-padding term on the input
/// projector. Independent of the compact path; used by the equivalence
/// tests.
Matrix svt_reference(const ProjectedUnitaryEncoding& e, const ApproxPolynomial& p);

/// Applies the map to one register of a state and appends a flag qubit
/// (dim-2 register, last position): the result is
///   (M (x) I)|s> (x) |0> + (sqrt(I - M^dagger M) (x) I)|s> (x) |1>,
/// exactly what the unitary dilation of M produces. The flag-|0> component
/// equals (M (x) I)|s>.
PureState apply_to_state(const TransformedMap& m, const PureState& s, Index acting_register);

/// Dilation helper used by the testers: same semantics for a raw operator.
PureState apply_with_flag(const Matrix& m, const PureState& s, Index acting_register);

}  // namespace qdpt

#endif  // QDPT_SVT_HPP_

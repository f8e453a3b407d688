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

#ifndef QDPT_COMMON_HPP_
#define QDPT_COMMON_HPP_

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace qdpt {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when a constructed object violates one of its declared invariants
/// (malformed probability vector, non-Hermitian density matrix, ...).
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a polynomial construction fails its certification grid.
/// This always signals a construction bug, never an acceptable outcome.
class CertificationError : public std::runtime_error {
 public:
  explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

// Tolerances shared across the library (see docs/layout.md for context).
inline constexpr double kSumTol = 1e-12;
inline constexpr double kHermTol = 1e-12;
inline constexpr double kEigClampTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kReconstructTol = 1e-10;

}  // namespace qdpt

#endif  // QDPT_COMMON_HPP_

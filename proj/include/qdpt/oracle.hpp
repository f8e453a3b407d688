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

#ifndef QDPT_ORACLE_HPP_
#define QDPT_ORACLE_HPP_

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "qdpt/types.hpp"

namespace qdpt {

/// Tallies applications of an input oracle. Forward and inverse uses count
/// separately; totals are reported as forward + inverse. Controlled
/// reflections (through encoding projectors) are tracked alongside.
/// Updates are atomic so parallel trials on clones are safe.
class QueryCounter {
 public:
  void charge(std::uint64_t fwd, std::uint64_t inv, std::uint64_t refl = 0) {
    forward_ += fwd;
    inverse_ += inv;
    reflections_ += refl;
  }
  std::uint64_t forward() const { return forward_.load(); }
  std::uint64_t inverse() const { return inverse_.load(); }
  std::uint64_t reflections() const { return reflections_.load(); }
  std::uint64_t total() const { return forward() + inverse(); }
  void reset() {
    forward_ = 0;
    inverse_ = 0;
    reflections_ = 0;
  }

 private:
  std::atomic<std::uint64_t> forward_{0};
  std::atomic<std::uint64_t> inverse_{0};
  std::atomic<std::uint64_t> reflections_{0};
};

/// One use of a derived oracle charges `weight` uses on `counter`.
struct ChargeEntry {
  std::shared_ptr<QueryCounter> counter;
  std::uint64_t weight = 1;
};

enum class AncillaStyle {
  kCopy,     // |phi_i> = |i>
  kTrivial,  // same layout; marks that any orthonormal choice is admissible
};

/// Unitary input oracle: U |0>_A |0>_B = sum_i sqrt(p_i) |phi_i>_A |psi_i>_B
/// with Tr_A of the prepared state equal to the source distribution /
/// density operator. Oracles are immutable; counters are shared and updated
/// through charge_use().
///
/// The full unitary and the purification vector are materialized lazily and
/// only below a size guard; semantic-mode pipelines never touch them.
class PurifiedOracle {
 public:
  using Source = std::variant<ClassicalDistribution, DensityOperator>;

  Index ancilla_dim() const { return da_; }
  Index system_dim() const { return db_; }
  Index total_dim() const { return da_ * db_; }

  bool classical() const { return std::holds_alternative<ClassicalDistribution>(source_); }
  const ClassicalDistribution& classical_source() const;
  const DensityOperator& density_source() const;
  /// Source density operator regardless of kind (diag(p) for classical).
  DensityOperator source_density() const;

  /// Spectrum of the source: p_i in B-basis order for classical sources,
  /// eigenvalues (descending) for density sources.
  RealVector source_probs() const;
  /// Columns are the B-register states |psi_i> matching source_probs().
  Matrix source_basis() const;

  /// U |0>|0>, dimension ancilla_dim * system_dim. Lazy; size-guarded.
  const Vector& purification() const;
  /// Full unitary, first column equal to purification(). Lazy; size-guarded.
  Matrix unitary() const;
  /// Ancilla states |phi_i> (columns), extracted from the purification
  /// against source_basis(); columns with p_i = 0 are zero.
  Matrix ancilla_states() const;

  const std::shared_ptr<QueryCounter>& counter() const { return counter_; }
  const std::vector<ChargeEntry>& charges() const { return charges_; }

  /// Records `fwd` forward and `inv` inverse applications (plus controlled
  /// reflections) on this oracle and everything it is built from.
  void charge_use(std::uint64_t fwd, std::uint64_t inv, std::uint64_t refl = 0) const;

  /// Same oracle with a Haar-random unitary applied on register A. The
  /// B-marginal is untouched; testers must behave identically on it.
  PurifiedOracle with_randomized_ancilla(std::uint64_t seed) const;

  // -- constructors ---------------------------------------------------------

  static PurifiedOracle purify_classical(const ClassicalDistribution& p,
                                         AncillaStyle style = AncillaStyle::kCopy,
                                         std::uint64_t completion_seed = 0);
  static PurifiedOracle purify_density(const DensityOperator& rho,
                                       std::uint64_t completion_seed = 0);
  /// f: table S -> [n] (0-based values below n); prepares the uniform
  /// superposition over S followed by the table query, so the B-marginal is
  /// the empirical distribution of f.
  static PurifiedOracle from_discrete_query(const std::vector<Index>& f, Index n,
                                            std::uint64_t completion_seed = 0);
  /// v: l2-normalized non-negative amplitude vector; the resulting oracle
  /// serves p_i = v_i^2 by copying |i> into a fresh register.
  static PurifiedOracle from_pure_state_oracle(const RealVector& v,
                                               std::uint64_t completion_seed = 0);

  friend PurifiedOracle mixture_oracle(const PurifiedOracle& o1, const PurifiedOracle& o2);
  friend PurifiedOracle product_oracle(const PurifiedOracle& o, Index n, Index m);

  AncillaStyle ancilla_style() const { return style_; }

 private:
  PurifiedOracle() = default;

  Index da_ = 0, db_ = 0;
  Source source_ = ClassicalDistribution(RealVector::Ones(1));
  AncillaStyle style_ = AncillaStyle::kCopy;
  std::shared_ptr<QueryCounter> counter_ = std::make_shared<QueryCounter>();
  std::vector<ChargeEntry> charges_;
  std::function<Vector()> purification_builder_;
  std::function<Matrix()> unitary_builder_;
  mutable std::shared_ptr<Vector> purification_cache_ = std::make_shared<Vector>();
};

/// Purified oracle for (rho + sigma)/2 via one extra coin qubit on the A
/// register. Each use charges one query to each underlying counter.
PurifiedOracle mixture_oracle(const PurifiedOracle& o1, const PurifiedOracle& o2);

/// For an oracle of p on [n]x[m]: purified oracle of p_A x p_B, realized by
/// two uses of the input oracle per application.
PurifiedOracle product_oracle(const PurifiedOracle& o, Index n, Index m);

/// Completes a unit column to a full unitary (Householder / QR based).
/// completion_seed != 0 mixes a Haar-random rotation into the orthogonal
/// complement; any completion is admissible for the algorithms here.
Matrix complete_unitary(const Vector& first_column, std::uint64_t completion_seed = 0);

}  // namespace qdpt

#endif  // QDPT_ORACLE_HPP_

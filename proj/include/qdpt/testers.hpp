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

#ifndef QDPT_TESTERS_HPP_
#define QDPT_TESTERS_HPP_

#include <optional>

#include "qdpt/ampest.hpp"
#include "qdpt/encoding.hpp"
#include "qdpt/poly.hpp"

namespace qdpt {

/// Execution modes. Matrix mode simulates the pipelines with explicit
/// operators and states (small n, see docs/layout.md for the caps);
/// semantic mode tracks the same amplitudes analytically from p, q, rho,
/// sigma and produces identical statistics at any n; exact mode replaces
/// amplitude estimation by the exact amplitudes and the approximating maps
/// by their target functions, yielding deterministic values.
enum class Mode { kMatrix, kSemantic, kExact };

Mode mode_from_string(const std::string& s);
std::string mode_to_string(Mode m);

struct StageTrace {
  std::string stage;
  std::uint64_t queries = 0;
};

struct TesterVerdict {
  std::optional<bool> far;        // set for decision testers
  std::optional<double> estimate;  // set for estimators (and exact decisions)
  std::uint64_t queries = 0;       // total from the input oracles' counters
  std::vector<StageTrace> trace;   // per-stage breakdown; sums to `queries`
  std::uint64_t seed = 0;
};

/// Parameter schedule of the classical entropy estimator:
/// Delta = eps/(4 n ln(n/eps)), beta = sqrt(Delta),
/// eta = eps/(24 ln(2/beta)), M_AE = ceil(12 pi ln(2/beta)/eps).
/// Only valid when n/eps >= 42, which makes Delta (ln(1/Delta)+1) <= eps/(2n)
/// (checked numerically at construction).
///
/// The density variant rescales singular values by 1/sqrt(n):
/// beta' = sqrt(Delta/n), eta' = eps/(24 ln(2/beta')), and the tighter AE
/// tolerance eps/(48 ln(2/beta')) that the rescaled error budget requires;
/// the estimator output is 4 ln(2/beta') * overlap - ln n.
struct EntropySchedule {
  Index n = 0;
  double eps = 0.0;
  double delta = 0.0, beta = 0.0, eta = 0.0;
  double log_2_over_beta = 0.0;
  int m_ae = 0;
  bool valid = false;
  bool density = false;

  static EntropySchedule classical(Index n, double eps);
  static EntropySchedule quantum(Index n, double eps);
};

/// Binning schedule of the robust l2 tester: theta = nu eps^2 / 6,
/// K = {-1, 0, ..., ceil(log2(1/theta))}, per-bin AE precision
/// 2^{k-9} theta / |K|.
struct BinSchedule {
  double eps = 0.0, nu = 0.0, theta = 0.0;
  int k_max = 0;
  int k_count = 0;  // |K| = k_max + 2
  double nu_fail_bin = 0.0;
  int r_bin = 0;   // boosting repetitions inside each A_k
  double nu_fail_ae = 0.0;
  int r_ae = 0;    // boosting repetitions for the per-bin estimates

  /// Separates p+q >= 2^{-k} from p+q <= 2^{-k-1} via Eq-(3)-style AE with
  /// M_k = ceil(kMagnitudeConst * 2^{k/2}); the constant makes the AE error
  /// bound at the decision boundary smaller than the gap 2^{-k-3} (on the
  /// amplitude scale (p+q)/2).
  static constexpr double kMagnitudeConst = 38.0;

  BinSchedule(double eps, double nu);

  int m_bin(int k) const;
  /// Acceptance threshold of A_k on the amplitude (p+q)/2.
  double bin_threshold(int k) const { return 3.0 * std::pow(2.0, -k - 3); }
  double precision(int k) const;
  /// AE rounds for the bin quantity, solved from the error bound against an
  /// a-priori amplitude cap 2^{k-9} min(2, 4 eps^2); keeps the 1/(nu eps)
  /// scaling.
  int m_ae(int k) const;
  /// Exact probability that boosted A_k outputs "greater" on amplitude a.
  double greater_prob(double a, int k) const;
  /// Exact label distribution s_k(x) over K (last entry: fall-through mass).
  std::vector<double> soft_labels(double a) const;
};

inline constexpr int kLessThanTheta = std::numeric_limits<int>::min();

/// Probabilistic magnitude estimate of log2(p(x), Algorithm-1 style: the
/// first k in K whose boosted A_k accepts, or kLessThanTheta. Charges the
/// A_k amplitude-estimation queries to both oracles.
int magnitude_bin(const PurifiedOracle& op, const PurifiedOracle& oq, Index x,
                  const BinSchedule& schedule, Rng& rng);

// -- entropy ---------------------------------------------------------------

/// boost > 1 takes the median of that many independent runs (the per-run
/// 8/pi^2 guarantee already exceeds 2/3, so the default is a single run).
TesterVerdict entropy_classical(const PurifiedOracle& o, double eps, std::uint64_t seed,
                                Mode mode = Mode::kSemantic, int boost = 1);
TesterVerdict entropy_quantum(const PurifiedOracle& o, double eps, std::uint64_t seed,
                              Mode mode = Mode::kSemantic, int boost = 1);

/// Deterministic pipeline value 4 ln(2/beta) sum_i p_i S(sqrt(p_i)) (and the
/// density analogue with the -ln n offset); the exact-mode identity the
/// estimators are built on.
double entropy_pipeline_exact(const PurifiedOracle& o, double eps);

// -- closeness -------------------------------------------------------------

TesterVerdict l2_classical_robust(const PurifiedOracle& op, const PurifiedOracle& oq, double eps,
                                  double nu, std::uint64_t seed, Mode mode = Mode::kSemantic);

enum class L2QuantumRoute { kAuto, kEntangled, kSwap };
TesterVerdict l2_quantum(const PurifiedOracle& orho, const PurifiedOracle& osigma, double eps,
                         double nu, std::uint64_t seed, Mode mode = Mode::kSemantic,
                         L2QuantumRoute route = L2QuantumRoute::kAuto);

TesterVerdict l3_closeness(const PurifiedOracle& orho, const PurifiedOracle& osigma, double eps,
                           std::uint64_t seed, Mode mode = Mode::kSemantic);

/// l1 testing by reduction to robust l2 with eps <- eps/sqrt(n), nu = 1/2.
TesterVerdict l1_closeness(const PurifiedOracle& o1, const PurifiedOracle& o2, double eps,
                           std::uint64_t seed, Mode mode = Mode::kSemantic);

/// Independence testing on [n] x [m] via the product oracle (two queries
/// per use) and l1 closeness.
TesterVerdict independence(const PurifiedOracle& op, Index n, Index m, double eps,
                           std::uint64_t seed, Mode mode = Mode::kSemantic);

// -- exact-mode reports (identity checks) ----------------------------------

struct L2ExactReport {
  double combined = 0.0;    // sum_k 2^{9-k} * (exact bin quantity)
  double l2_squared = 0.0;  // ||p-q||_2^2
  double theta = 0.0;
  std::vector<double> bin_values;
  double max_inverse_map = 0.0;  // max over correctly binned x of 2^{-k-2}/(p+q)
  double max_amp_map = 0.0;      // max over correctly binned x of |p-q|/2^{-k+3}
};

/// Exact-mode l2 pipeline with ideal maps; the combined estimate matches
/// ||p-q||_2^2 within 2 theta and the per-bin maps are contractions.
L2ExactReport l2_exact_report(const PurifiedOracle& op, const PurifiedOracle& oq, double eps,
                              double nu);

/// Exact flag probability Tr[(rho-sigma)^2 (rho+sigma)]/8 of the l3 pipeline.
double l3_exact_flag_probability(const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace qdpt

#endif  // QDPT_TESTERS_HPP_

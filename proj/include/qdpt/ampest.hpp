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

#ifndef QDPT_AMPEST_HPP_
#define QDPT_AMPEST_HPP_

#include <functional>

#include "qdpt/rng.hpp"
#include "qdpt/types.hpp"

namespace qdpt {

/// Outcome of (possibly boosted) amplitude estimation.
struct AmplitudeEstimate {
  double estimate = 0.0;            // in [0, 1]
  int m = 1;                        // oracle applications per trial
  int trials = 1;                   // boosting repetitions
  std::uint64_t queries_charged = 0;  // m * trials * queries-per-U-application
};

/// Exact outcome distribution of phase-estimation-based amplitude
/// estimation on a target with amplitude-squared `a`, using M applications
/// of the walk operator: outcome j in {0..M-1} has probability
/// sin^2(M Delta_j) / (M^2 sin^2(Delta_j)) with Delta_j = theta - j pi / M,
/// theta = arcsin(sqrt(a)); the estimate is sin^2(j pi / M). Validated
/// against a full matrix simulation of the estimation circuit (build gate).
std::vector<double> ae_outcome_pmf(double a, int m);

/// One sample from the exact outcome distribution; returns sin^2(j pi / M).
double ae_sample(double a, int m, Rng& rng);

/// Median of 2 ceil(18 ln(1/nu_fail)) + 1 independent samples.
AmplitudeEstimate ae_boosted(double a, int m, double nu_fail, Rng& rng);

/// The error bound 2 pi sqrt(a (1-a)) / M + pi^2 / M^2 (holds with
/// probability >= 8/pi^2 per trial).
double ae_error_bound(double a, int m);
inline constexpr double kAeSuccess = 0.8105694691387022;  // 8 / pi^2

/// Probability that a single AE trial returns an estimate >= threshold;
/// exact, from the outcome distribution.
double ae_prob_at_least(double a, int m, double threshold);

/// Probability that the median of `trials` AE runs is >= threshold
/// (binomial tail over the per-trial probability).
double ae_boosted_prob_at_least(double a, int m, int trials, double threshold);

int boost_trials(double nu_fail);

/// Full matrix simulation of the amplitude estimation circuit on a
/// one-qubit target: returns the outcome distribution over j in {0..M-1}.
/// Reference implementation for the build-gate fidelity test.
std::vector<double> ae_circuit_pmf(double a, int m);

/// Exact flag-|0> probability of a state whose last register is the dim-2
/// flag, plus a boosted estimate of it.
struct FlagProbability {
  double exact = 0.0;
  AmplitudeEstimate estimate;
};
FlagProbability flag_probability(const PureState& s, int m, double nu_fail, Rng& rng);

/// Overlap |<s1|s2>| between two prepared states: exact value plus an AE
/// estimate of the magnitude (the estimate is sqrt of the AE output for
/// the squared overlap; the sign is not observable here, see the module
/// notes in docs/layout.md).
struct OverlapEstimate {
  double exact_overlap = 0.0;  // signed real part when both states are real
  double magnitude = 0.0;      // |<s1|s2>|
  double estimate = 0.0;       // AE estimate of the magnitude
  AmplitudeEstimate ae;
};
OverlapEstimate overlap_estimate(const PureState& s1, const PureState& s2, int m, double nu_fail,
                                 Rng& rng);
/// Semantic-mode variant when the exact overlap is known analytically.
OverlapEstimate overlap_estimate_value(double overlap, int m, double nu_fail, Rng& rng);

}  // namespace qdpt

#endif  // QDPT_AMPEST_HPP_

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

#ifndef QDPT_GENERATE_HPP_
#define QDPT_GENERATE_HPP_

#include "qdpt/rng.hpp"
#include "qdpt/types.hpp"

namespace qdpt {

// Test-instance generators. All are deterministic given their seed.

ClassicalDistribution uniform_distribution(Index n);

/// p_i proportional to i^{-s}, i = 1..n. Requires s >= 0.
ClassicalDistribution zipf_distribution(Index n, double s);

/// Flat Dirichlet sample (normalized i.i.d. exponentials).
ClassicalDistribution dirichlet_random(Index n, std::uint64_t seed);

/// The two-point distribution (1/2 + delta, 1/2 - delta) on n = 2.
ClassicalDistribution two_point(double delta);

/// rho = G G^dagger / tr(...) for an n x rank complex Gaussian G.
DensityOperator haar_random_density(Index n, Index rank, std::uint64_t seed);

/// Haar-distributed unitary (QR of a complex Gaussian with phase fix).
Matrix haar_random_unitary(Index n, std::uint64_t seed);

/// Random pure density operator |v><v|.
DensityOperator random_pure_density(Index n, std::uint64_t seed);

/// A pair (p, q) with ||p - q||_2 equal to eps exactly (up to roundoff):
/// q = p + eps * d with d mean-free, unit l2 norm, q kept non-negative.
std::pair<ClassicalDistribution, ClassicalDistribution> l2_separated_pair(Index n, double eps,
                                                                          std::uint64_t seed);

/// A pair (rho, sigma) of density operators with ||rho - sigma||_2 = eps.
std::pair<DensityOperator, DensityOperator> l2_separated_density_pair(Index n, double eps,
                                                                      std::uint64_t seed);

/// Distribution on [n]x[m] that is exactly the product of its marginals.
ClassicalDistribution product_instance(Index n, Index m, std::uint64_t seed);

/// Perfectly correlated distribution on [n]x[n]: mass 1/n on each (i, i).
ClassicalDistribution correlated_diagonal(Index n);

/// Marginals p_A, p_B of a distribution on [n]x[m] and their product.
RealVector marginal_a(const ClassicalDistribution& p, Index n, Index m);
RealVector marginal_b(const ClassicalDistribution& p, Index n, Index m);
ClassicalDistribution product_of_marginals(const ClassicalDistribution& p, Index n, Index m);

}  // namespace qdpt

#endif  // QDPT_GENERATE_HPP_

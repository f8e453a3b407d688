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

#ifndef QDPT_BASELINES_HPP_
#define QDPT_BASELINES_HPP_

#include "qdpt/rng.hpp"
#include "qdpt/types.hpp"

namespace qdpt {

// Classical sampling baselines, deliberately simple: they provide
// qualitative comparison curves next to the query-counted algorithms and
// are labeled as such in the harness output.

struct SampleBudget {
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
};

/// Empirical-histogram plug-in entropy estimate (nats).
double plugin_entropy(const ClassicalDistribution& p, const SampleBudget& budget);

/// Unbiased collision-statistic estimate of ||p - q||_2^2.
double collision_l2(const ClassicalDistribution& p, const ClassicalDistribution& q,
                    const SampleBudget& budget);

/// Sampling helper shared by the baselines.
Index sample_index(const RealVector& probs, Rng& rng);

}  // namespace qdpt

#endif  // QDPT_BASELINES_HPP_

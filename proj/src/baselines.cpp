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

#include "qdpt/baselines.hpp"

#include <cmath>

namespace qdpt {

Index sample_index(const RealVector& probs, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (Index i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return probs.size() - 1;
}

double plugin_entropy(const ClassicalDistribution& p, const SampleBudget& budget) {
  if (budget.samples < 1) throw InvariantError("plugin_entropy: need samples >= 1");
  Rng rng(budget.seed);
  RealVector counts = RealVector::Zero(p.size());
  for (std::uint64_t s = 0; s < budget.samples; ++s) counts[sample_index(p.probs(), rng)] += 1.0;
  double n = static_cast<double>(budget.samples);
  double h = 0.0;
  for (Index i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0.0) {
      double f = counts[i] / n;
      h -= f * std::log(f);
    }
  }
  return h;
}

double collision_l2(const ClassicalDistribution& p, const ClassicalDistribution& q,
                    const SampleBudget& budget) {
  if (p.size() != q.size()) throw InvariantError("collision_l2: dimension mismatch");
  std::uint64_t m = budget.samples;
  if (m < 2) throw InvariantError("collision_l2: need samples >= 2");
  Rng rng(budget.seed);
  RealVector cp = RealVector::Zero(p.size()), cq = RealVector::Zero(p.size());
  for (std::uint64_t s = 0; s < m; ++s) cp[sample_index(p.probs(), rng)] += 1.0;
  for (std::uint64_t s = 0; s < m; ++s) cq[sample_index(q.probs(), rng)] += 1.0;
  double dm = static_cast<double>(m);
  // Unbiased: sum_i [C_i^p (C_i^p - 1) + C_i^q (C_i^q - 1)] / (m (m-1))
  //           - 2 sum_i C_i^p C_i^q / m^2.
  double same = 0.0, cross = 0.0;
  for (Index i = 0; i < cp.size(); ++i) {
    same += cp[i] * (cp[i] - 1.0) + cq[i] * (cq[i] - 1.0);
    cross += cp[i] * cq[i];
  }
  return same / (dm * (dm - 1.0)) - 2.0 * cross / (dm * dm);
}

}  // namespace qdpt

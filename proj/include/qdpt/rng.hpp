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

#ifndef QDPT_RNG_HPP_
#define QDPT_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace qdpt {

/// Deterministic 64-bit generator (splitmix64). We roll our own uniform /
/// normal / exponential samplers instead of <random> distributions so that
/// output streams are identical across standard library implementations;
/// reproducibility of every output byte is a harness contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double uniform_pos() { return 1.0 - uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo is fine here: n is tiny compared to 2^64 in all
    // our uses, and bias below 2^-40 is irrelevant for seeded tests.
    return next_u64() % n;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = uniform_pos();
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(6.283185307179586476925286766559 * v);
    have_spare_ = true;
    return r * std::cos(6.283185307179586476925286766559 * v);
  }

  double exponential() { return -std::log(uniform_pos()); }

  /// Derives an independent stream for a sub-task; (seed, index) -> stream.
  static Rng substream(std::uint64_t master, std::uint64_t index) {
    Rng mix(master ^ (0x5851f42d4c957f2dULL * (index + 1)));
    mix.next_u64();
    return Rng(mix.next_u64());
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qdpt

#endif  // QDPT_RNG_HPP_

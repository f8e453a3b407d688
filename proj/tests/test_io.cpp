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

#include "doctest.h"
#include "qdpt/generate.hpp"
#include "qdpt/io.hpp"

using namespace qdpt;

TEST_CASE("classical distribution file round trip") {
  ClassicalDistribution p = dirichlet_random(6, 11);
  std::string text = distribution_to_json(p);
  DistributionInput in = parse_distribution_json(text);
  REQUIRE(std::holds_alternative<ClassicalDistribution>(in));
  CHECK((std::get<ClassicalDistribution>(in).probs() - p.probs()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("density file round trip") {
  DensityOperator rho = haar_random_density(4, 3, 2);
  std::string text = distribution_to_json(rho);
  DistributionInput in = parse_distribution_json(text);
  REQUIRE(std::holds_alternative<DensityOperator>(in));
  CHECK((std::get<DensityOperator>(in).matrix() - rho.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(parse_distribution_json("not json"), InvariantError);
  CHECK_THROWS_AS(parse_distribution_json("{\"type\":\"nope\"}"), InvariantError);
  CHECK_THROWS_AS(parse_distribution_json("{\"type\":\"classical\"}"), InvariantError);
  // Invariants checked on load: probabilities must sum to 1.
  CHECK_THROWS_AS(parse_distribution_json("{\"type\":\"classical\",\"probs\":[0.5,0.4]}"),
                  InvariantError);
  CHECK_THROWS_AS(parse_distribution_json("{\"type\":\"classical\",\"probs\":[1.5,-0.5]}"),
                  InvariantError);
  // Non-Hermitian density.
  CHECK_THROWS_AS(
      parse_distribution_json(
          "{\"type\":\"density\",\"re\":[[1,0.2],[0,0]],\"im\":[[0,0],[0,0]]}"),
      InvariantError);
  CHECK_THROWS_AS(load_distribution_file("/nonexistent/path.json"), InvariantError);
}

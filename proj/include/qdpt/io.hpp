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

#ifndef QDPT_IO_HPP_
#define QDPT_IO_HPP_

#include <string>
#include <variant>

#include "qdpt/types.hpp"

namespace qdpt {

using DistributionInput = std::variant<ClassicalDistribution, DensityOperator>;

/// Parses {"type":"classical","probs":[...]} or
/// {"type":"density","re":[[...]],"im":[[...]]}. Inputs that violate the
/// type invariants are rejected with InvariantError.
DistributionInput parse_distribution_json(const std::string& text);
DistributionInput load_distribution_file(const std::string& path);

std::string distribution_to_json(const ClassicalDistribution& d);
std::string distribution_to_json(const DensityOperator& rho);

}  // namespace qdpt

#endif  // QDPT_IO_HPP_

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

#include "qdpt/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qdpt {

using nlohmann::json;

DistributionInput parse_distribution_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvariantError(std::string("distribution file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw InvariantError("distribution file must be an object with a \"type\" string");
  }
  std::string type = j["type"].get<std::string>();
  if (type == "classical") {
    if (!j.contains("probs") || !j["probs"].is_array()) {
      throw InvariantError("classical distribution needs a \"probs\" array");
    }
    const auto& arr = j["probs"];
    RealVector p(static_cast<Index>(arr.size()));
    for (Index i = 0; i < p.size(); ++i) {
      if (!arr[i].is_number()) throw InvariantError("probs entries must be numbers");
      p[i] = arr[i].get<double>();
    }
    return ClassicalDistribution(std::move(p));
  }
  if (type == "density") {
    if (!j.contains("re") || !j.contains("im")) {
      throw InvariantError("density input needs \"re\" and \"im\" matrices");
    }
    const auto& re = j["re"];
    const auto& im = j["im"];
    if (!re.is_array() || !im.is_array() || re.size() != im.size() || re.empty()) {
      throw InvariantError("density \"re\"/\"im\" must be equal-sized non-empty arrays");
    }
    Index n = static_cast<Index>(re.size());
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
      if (!re[i].is_array() || !im[i].is_array() || static_cast<Index>(re[i].size()) != n ||
          static_cast<Index>(im[i].size()) != n) {
        throw InvariantError("density matrices must be square");
      }
      for (Index k = 0; k < n; ++k) {
        m(i, k) = cxd(re[i][k].get<double>(), im[i][k].get<double>());
      }
    }
    return DensityOperator(std::move(m));
  }
  throw InvariantError("distribution \"type\" must be \"classical\" or \"density\"");
}

DistributionInput load_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvariantError("cannot open distribution file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_distribution_json(buf.str());
}

std::string distribution_to_json(const ClassicalDistribution& d) {
  json j;
  j["type"] = "classical";
  j["probs"] = json::array();
  for (Index i = 0; i < d.size(); ++i) j["probs"].push_back(d[i]);
  return j.dump();
}

std::string distribution_to_json(const DensityOperator& rho) {
  json j;
  j["type"] = "density";
  json re = json::array(), im = json::array();
  for (Index i = 0; i < rho.dim(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (Index k = 0; k < rho.dim(); ++k) {
      rrow.push_back(rho.matrix()(i, k).real());
      irow.push_back(rho.matrix()(i, k).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

}  // namespace qdpt

// Copyright 2026 The sbai Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sbai/io.hpp"

#include <fstream>

namespace sbai {

nlohmann::json matrix_to_json(const Matd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matd matrix_from_json(const nlohmann::json& j) {
  require(j.is_array() && !j.empty(), "matrix json: expected non-empty array");
  const Index rows = static_cast<Index>(j.size());
  require(j[0].is_array() && !j[0].empty(), "matrix json: expected row arrays");
  const Index cols = static_cast<Index>(j[0].size());
  Matd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    require(j[i].is_array() && static_cast<Index>(j[i].size()) == cols,
            "matrix json: ragged rows");
    for (Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<Real>();
  }
  return m;
}

nlohmann::json vector_to_json(const Vecd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vecd vector_from_json(const nlohmann::json& j) {
  require(j.is_array(), "vector json: expected array");
  Vecd v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v[i] = j[i].get<Real>();
  return v;
}

nlohmann::json instance_to_json(const BanditInstance& inst) {
  return nlohmann::json{{"arms", matrix_to_json(inst.arms)},
                        {"theta_star", vector_to_json(inst.theta_star)},
                        {"noise_sigma", inst.noise_sigma},
                        {"s", inst.s}};
}

BanditInstance instance_from_json(const nlohmann::json& j) {
  for (const char* key : {"arms", "theta_star", "noise_sigma", "s"})
    require(j.contains(key), std::string("instance json: missing ") + key);
  Matd arms = matrix_from_json(j["arms"]);
  Vecd theta = vector_from_json(j["theta_star"]);
  const Real sigma = j["noise_sigma"].get<Real>();
  const Index s = j["s"].get<Index>();
  const Index nonzero = static_cast<Index>(support_of(theta).size());
  if (nonzero == s)
    return make_instance(std::move(arms), std::move(theta), sigma, s);
  return make_misspecified_instance(std::move(arms), std::move(theta), sigma, s);
}

BanditInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_instance: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return instance_from_json(j);
}

void save_instance(const BanditInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("save_instance: cannot open " + path);
  out << instance_to_json(inst).dump(2) << "\n";
}

}  // namespace sbai

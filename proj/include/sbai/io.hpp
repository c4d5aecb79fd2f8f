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

#ifndef SBAI_IO_HPP_
#define SBAI_IO_HPP_

#include <string>

#include <json.hpp>

#include "sbai/instance.hpp"

namespace sbai {

// Schema: {"arms": [[...] x K], "theta_star": [...], "noise_sigma": x,
// "s": n}. Row k of "arms" is arm k.
nlohmann::json instance_to_json(const BanditInstance& inst);
BanditInstance instance_from_json(const nlohmann::json& j);

BanditInstance load_instance(const std::string& path);
void save_instance(const BanditInstance& inst, const std::string& path);

nlohmann::json matrix_to_json(const Matd& m);
Matd matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Vecd& v);
Vecd vector_from_json(const nlohmann::json& j);

}  // namespace sbai

#endif  // SBAI_IO_HPP_

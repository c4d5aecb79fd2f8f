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

#ifndef SBAI_GENERATORS_HPP_
#define SBAI_GENERATORS_HPP_

#include <string>

#include "sbai/instance.hpp"
#include "sbai/rng.hpp"

namespace sbai {

// Benchmark instance families:
//  A  arms uniform on the sphere of radius sqrt(d/s), theta = 1 on [s]
//  B  family-A arms; theta = 1 on [s] plus delta * (random sign) elsewhere
//  C  arm entries i.i.d. N(0, 1/s), theta = 1/sqrt(s) on [s]
//  D  arm entries (random sign) * cos(pi/4 + N(0, 0.01)), theta as in C
//  E  two informative coordinates carrying a fan of unit vectors around the
//     vertical, the rest uniform on a sphere; theta as in C with s = 2
enum class Family { kA, kB, kC, kD, kE };

struct GeneratorConfig {
  Index num_arms = 50;
  Index dim = 10;
  Index sparsity = 2;
  Real noise_sigma = 1.0;
  Real delta = 0.0;  // family B only: off-support magnitude
};

Family family_from_name(const std::string& name);
std::string family_name(Family family);

BanditInstance make_family_instance(Family family, const GeneratorConfig& cfg,
                                    Rng& rng);

}  // namespace sbai

#endif  // SBAI_GENERATORS_HPP_

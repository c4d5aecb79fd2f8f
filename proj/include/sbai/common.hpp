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

#ifndef SBAI_COMMON_HPP_
#define SBAI_COMMON_HPP_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace sbai {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Real = double;
using Matd = Mat<Real>;
using Vecd = Vec<Real>;
using Veci = Vec<int>;
using Index = Eigen::Index;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller passed a value outside an operation's documented domain.
struct InvalidArgument : Error {
  using Error::Error;
};

// Two or more arms share the largest mean; identification is ill-posed.
struct NonUniqueBestArm : Error {
  using Error::Error;
};

// Budget too small for the requested round structure.
struct InfeasibleBudget : Error {
  using Error::Error;
};

// Arm set does not span the space the operation requires.
struct RankDeficient : Error {
  using Error::Error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

}  // namespace sbai

#endif  // SBAI_COMMON_HPP_

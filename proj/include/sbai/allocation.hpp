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

#ifndef SBAI_ALLOCATION_HPP_
#define SBAI_ALLOCATION_HPP_

#include <cmath>
#include <limits>

#include "sbai/common.hpp"

namespace sbai {

// Design weights over an arm set together with solver diagnostics.
struct Allocation {
  Vecd weights;
  Real objective_value = 0;
  Real certificate_gap = std::numeric_limits<Real>::quiet_NaN();
  bool converged = false;
  bool degenerate = false;
};

// Weighted second-moment matrix sum_k w_k a_k a_k'. Arm vectors are the rows
// of `arms`; the result is d x d.
template <typename DW, typename DA>
Mat<typename DA::Scalar> gram(const Eigen::MatrixBase<DW>& weights,
                              const Eigen::MatrixBase<DA>& arms) {
  using Scalar = typename DA::Scalar;
  Mat<Scalar> m = arms.transpose() * weights.asDiagonal() * arms;
  // The product picks up rounding asymmetry; callers expect an exact Gram.
  m = ((m + m.transpose()) / Scalar(2)).eval();
  return m;
}

inline bool is_valid_gram(const Matd& m, Real sym_tol = 1e-10,
                          Real eig_tol = -1e-10) {
  if (m.rows() != m.cols()) return false;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > sym_tol) return false;
  Eigen::SelfAdjointEigenSolver<Matd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= eig_tol;
}

// Deterministic apportionment of an integer budget T along the weights:
// start from counts ceil((T - n/2) w_i) and repair the total one pull at a
// time, moving the count whose ratio to its weight is most out of line.
// Ties go to the lowest index. Zero-weight entries stay at zero.
template <typename DW>
Veci round_allocation(const Eigen::MatrixBase<DW>& weights, long T) {
  const Index n = weights.size();
  require(n >= 1, "round_allocation: empty weight vector");
  require(T >= 0, "round_allocation: negative budget");
  Real sum = 0;
  for (Index i = 0; i < n; ++i) {
    require(weights[i] >= -1e-12, "round_allocation: negative weight");
    sum += weights[i];
  }
  require(std::abs(sum - 1.0) <= 1e-6,
          "round_allocation: weights do not sum to 1");

  constexpr Real kInf = std::numeric_limits<Real>::infinity();
  Veci counts(n);
  long total = 0;
  for (Index i = 0; i < n; ++i) {
    const Real w = std::max<Real>(weights[i], 0.0);
    counts[i] = w > 0 ? static_cast<int>(std::ceil((T - n / 2.0) * w)) : 0;
    total += counts[i];
  }

  long guard = 10 * (std::abs(total - T) + n + 1);
  while (total != T && guard-- > 0) {
    if (total < T) {
      Index best = 0;
      Real best_ratio = kInf;
      for (Index i = 0; i < n; ++i) {
        const Real w = weights[i];
        const Real r = w > 0 ? counts[i] / w : kInf;
        if (r < best_ratio) {
          best_ratio = r;
          best = i;
        }
      }
      ++counts[best];
      ++total;
    } else {
      Index best = 0;
      Real best_ratio = -kInf;
      for (Index i = 0; i < n; ++i) {
        const Real w = weights[i];
        // Zero-weight entries sit at zero pulls; (counts-1)/0 counts as -inf
        // there so they are never driven negative.
        const Real r = w > 0 ? (counts[i] - 1) / w
                             : (counts[i] >= 1 ? kInf : -kInf);
        if (r > best_ratio) {
          best_ratio = r;
          best = i;
        }
      }
      --counts[best];
      --total;
    }
  }
  if (total != T) throw Error("round_allocation: repair loop did not close");
  return counts;
}

}  // namespace sbai

#endif  // SBAI_ALLOCATION_HPP_

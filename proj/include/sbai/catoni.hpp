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

#ifndef SBAI_CATONI_HPP_
#define SBAI_CATONI_HPP_

#include <cmath>

#include "sbai/common.hpp"

namespace sbai {

// Odd, monotone influence with logarithmic tails; the widest admissible
// choice for heavy-tail mean estimation.
template <typename Scalar>
Scalar catoni_influence(Scalar x) {
  const Scalar a = std::abs(x);
  const Scalar v = std::log(Scalar(1) + a + a * a / Scalar(2));
  return x < 0 ? -v : v;
}

// M-estimator of location: the root y of sum_i psi(alpha (z_i - y)) = 0.
// The sum is strictly decreasing in y and changes sign on [min z, max z], so
// bisection to 1e-10 suffices.
template <typename D>
typename D::Scalar catoni(const Eigen::MatrixBase<D>& samples,
                          typename D::Scalar alpha) {
  using Scalar = typename D::Scalar;
  require(samples.size() >= 1, "catoni: no samples");
  require(alpha > 0 && std::isfinite(alpha), "catoni: bad scale");
  require(samples.allFinite(), "catoni: non-finite sample");

  Scalar lo = samples.minCoeff();
  Scalar hi = samples.maxCoeff();
  if (lo == hi) return lo;

  const auto f = [&](Scalar y) {
    Scalar acc = 0;
    for (Index i = 0; i < samples.size(); ++i)
      acc += catoni_influence(alpha * (samples[i] - y));
    return acc;
  };

  for (int it = 0; it < 200 && hi - lo > Scalar(1e-10); ++it) {
    const Scalar mid = (lo + hi) / 2;
    const Scalar v = f(mid);
    if (v == 0) return mid;
    if (v > 0)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace sbai

#endif  // SBAI_CATONI_HPP_

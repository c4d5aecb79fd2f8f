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

#ifndef SBAI_INSTANCE_HPP_
#define SBAI_INSTANCE_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "sbai/common.hpp"
#include "sbai/rng.hpp"

namespace sbai {

// One bandit problem: arm vectors (rows of `arms`), the hidden parameter, the
// reward noise scale, and the sparsity budget s. theta_min is the smallest
// coefficient magnitude an estimator must detect.
struct BanditInstance {
  Matd arms;
  Vecd theta_star;
  Real noise_sigma = 1.0;
  Index s = 1;
  Real theta_min = 0;
  // True when theta_star has more than s nonzero coordinates (robustness
  // experiments); theta_min is then the s-th largest magnitude.
  bool misspecified = false;

  Index num_arms() const { return arms.rows(); }
  Index dim() const { return arms.cols(); }
};

namespace detail {

inline void validate_instance_common(const Matd& arms, const Vecd& theta,
                                     Real sigma, Index s) {
  require(arms.rows() >= 2, "instance: need at least two arms");
  require(arms.cols() >= 1, "instance: need dimension >= 1");
  require(theta.size() == arms.cols(), "instance: theta dimension mismatch");
  require(arms.allFinite() && theta.allFinite(), "instance: non-finite entry");
  require(sigma >= 0, "instance: negative noise scale");
  require(s >= 1 && s <= arms.cols(), "instance: s outside [1, d]");
}

}  // namespace detail

inline std::vector<Index> support_of(const Vecd& theta) {
  std::vector<Index> sup;
  for (Index j = 0; j < theta.size(); ++j)
    if (theta[j] != 0.0) sup.push_back(j);
  return sup;
}

// Strict factory: the parameter must have exactly s nonzero coordinates.
inline BanditInstance make_instance(Matd arms, Vecd theta_star, Real sigma,
                                    Index s) {
  detail::validate_instance_common(arms, theta_star, sigma, s);
  const auto sup = support_of(theta_star);
  require(static_cast<Index>(sup.size()) == s,
          "instance: support size does not equal s");
  Real tmin = std::numeric_limits<Real>::infinity();
  for (Index j : sup) tmin = std::min(tmin, std::abs(theta_star[j]));
  return BanditInstance{std::move(arms), std::move(theta_star), sigma, s, tmin,
                        false};
}

// Permissive factory for deliberately misspecified parameters (dense theta
// with nominal sparsity s). theta_min becomes the s-th largest magnitude.
inline BanditInstance make_misspecified_instance(Matd arms, Vecd theta_star,
                                                 Real sigma, Index s) {
  detail::validate_instance_common(arms, theta_star, sigma, s);
  std::vector<Real> mags(theta_star.size());
  for (Index j = 0; j < theta_star.size(); ++j) mags[j] = std::abs(theta_star[j]);
  std::nth_element(mags.begin(), mags.begin() + (s - 1), mags.end(),
                   std::greater<Real>());
  return BanditInstance{std::move(arms), std::move(theta_star), sigma, s,
                        mags[s - 1], true};
}

struct InstanceSummary {
  Vecd means;
  Index best_arm = 0;
  // Mean differences to the best arm, ascending; size K-1, first entry is the
  // gap of the closest competitor and is strictly positive.
  Vecd sorted_gaps;
};

inline InstanceSummary summarize(const BanditInstance& inst) {
  InstanceSummary out;
  out.means = inst.arms * inst.theta_star;
  const Index K = out.means.size();
  Index best = 0;
  for (Index k = 1; k < K; ++k)
    if (out.means[k] > out.means[best]) best = k;
  int at_max = 0;
  for (Index k = 0; k < K; ++k)
    if (out.means[k] == out.means[best]) ++at_max;
  if (at_max > 1) throw NonUniqueBestArm("summarize: best mean is not unique");
  out.best_arm = best;
  out.sorted_gaps.resize(K - 1);
  Index p = 0;
  for (Index k = 0; k < K; ++k)
    if (k != best) out.sorted_gaps[p++] = out.means[best] - out.means[k];
  std::sort(out.sorted_gaps.data(), out.sorted_gaps.data() + (K - 1));
  return out;
}

inline Real max_abs_mean(const BanditInstance& inst) {
  return (inst.arms * inst.theta_star).cwiseAbs().maxCoeff();
}

// Largest of i / gap_i^2 over the m arms closest to the best; the usual
// fixed-budget difficulty measure restricted to the top m.
inline Real hardness(const InstanceSummary& summary, Index m) {
  const Index K = summary.means.size();
  require(m >= 2 && m <= K, "hardness: m outside [2, K]");
  Real h = 0;
  for (Index i = 2; i <= m; ++i) {
    const Real gap = summary.sorted_gaps[i - 2];
    h = std::max(h, static_cast<Real>(i) / (gap * gap));
  }
  return h;
}

// Noisy reward for each requested pull, in order.
inline Vecd sample_rewards(const BanditInstance& inst,
                           const std::vector<Index>& pulls, Rng& rng) {
  const Vecd means = inst.arms * inst.theta_star;
  Vecd y(static_cast<Index>(pulls.size()));
  for (Index t = 0; t < y.size(); ++t) {
    const Index a = pulls[static_cast<std::size_t>(t)];
    require(a >= 0 && a < inst.num_arms(), "sample_rewards: arm out of range");
    y[t] = means[a] + inst.noise_sigma * rng.normal();
  }
  return y;
}

}  // namespace sbai

#endif  // SBAI_INSTANCE_HPP_

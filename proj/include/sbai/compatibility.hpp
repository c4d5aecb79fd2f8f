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

#ifndef SBAI_COMPATIBILITY_HPP_
#define SBAI_COMPATIBILITY_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "sbai/common.hpp"

namespace sbai {

namespace detail {

// Euclidean projection onto {v >= 0, sum v = total}.
inline void project_simplex(Vecd& v, Real total) {
  const Index n = v.size();
  std::vector<Real> s(v.data(), v.data() + n);
  std::sort(s.begin(), s.end(), std::greater<Real>());
  Real cum = 0, tau = s[0] - total;
  for (Index k = 0; k < n; ++k) {
    cum += s[k];
    const Real cand = (cum - total) / (k + 1);
    if (s[k] - cand > 0) tau = cand;
  }
  for (Index i = 0; i < n; ++i) v[i] = std::max(v[i] - tau, 0.0);
}

// Euclidean projection onto {v >= 0, sum v <= cap}.
inline void project_capped_orthant(Vecd& v, Real cap) {
  for (Index i = 0; i < v.size(); ++i) v[i] = std::max(v[i], 0.0);
  if (v.sum() > cap) project_simplex(v, cap);
}

}  // namespace detail

struct CompatibilityResult {
  Real value = 0;
  // False when the subset enumeration cap forced the smallest-eigenvalue
  // lower bound instead of the exact minimum.
  bool exact = true;
};

// Squared compatibility constant of M for the index set S: the minimum of
// |S| theta' M theta over theta with ||theta_S||_1 = 1 and
// ||theta_{S^c}||_1 <= 3. Solved per sign pattern of theta_S (the first sign
// is fixed; the objective is even) by accelerated projected gradient on the
// product of a simplex and a capped orthant.
inline Real compatibility_constant(const Matd& m, const std::vector<Index>& S,
                                   Real tol = 1e-9, long max_iters = 4000) {
  const Index d = m.rows();
  const Index s = static_cast<Index>(S.size());
  require(m.cols() == d, "compatibility_constant: M not square");
  require(s >= 1, "compatibility_constant: empty index set");
  require(s <= 8, "compatibility_constant: index set larger than 8");
  for (Index j : S) require(j >= 0 && j < d, "compatibility_constant: bad index");

  std::vector<Index> off;
  {
    std::vector<bool> in(d, false);
    for (Index j : S) in[j] = true;
    for (Index j = 0; j < d; ++j)
      if (!in[j]) off.push_back(j);
  }
  const Index f = static_cast<Index>(off.size());

  Eigen::SelfAdjointEigenSolver<Matd> es(m, Eigen::EigenvaluesOnly);
  const Real lmax = es.eigenvalues().maxCoeff();
  const Real L = 4.0 * std::max(lmax, 1e-300);

  const auto theta_of = [&](const Vecd& x, const std::vector<Real>& sign) {
    Vecd theta = Vecd::Zero(d);
    for (Index k = 0; k < s; ++k) theta[S[k]] = sign[k] * x[k];
    for (Index j = 0; j < f; ++j) theta[off[j]] = x[s + j] - x[s + f + j];
    return theta;
  };

  Real best = std::numeric_limits<Real>::infinity();
  const long patterns = 1L << (s - 1);
  std::vector<Real> sign(s, 1.0);
  Vecd warm;  // carried across patterns, nearby problems
  for (long p = 0; p < patterns; ++p) {
    for (Index k = 1; k < s; ++k) sign[k] = (p >> (k - 1)) & 1 ? -1.0 : 1.0;

    Vecd x(s + 2 * f);
    if (warm.size() == x.size()) {
      x = warm;
    } else {
      x.head(s).setConstant(1.0 / s);
      x.tail(2 * f).setZero();
    }
    Vecd xp = x;
    Real t_acc = 1.0;
    Real prev_val = std::numeric_limits<Real>::infinity();
    int flat = 0;
    for (long it = 0; it < max_iters; ++it) {
      // Gradient at the extrapolated point.
      const Real t_next = (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc)) / 2.0;
      Vecd yx = x + ((t_acc - 1.0) / t_next) * (x - xp);
      const Vecd theta = theta_of(yx, sign);
      const Vecd mt = m * theta;
      Vecd grad(x.size());
      for (Index k = 0; k < s; ++k) grad[k] = 2.0 * sign[k] * mt[S[k]];
      for (Index j = 0; j < f; ++j) {
        grad[s + j] = 2.0 * mt[off[j]];
        grad[s + f + j] = -2.0 * mt[off[j]];
      }
      Vecd xn = yx - grad / L;
      Vecd zpart = xn.head(s);
      detail::project_simplex(zpart, 1.0);
      xn.head(s) = zpart;
      if (f > 0) {
        Vecd wpart = xn.tail(2 * f);
        detail::project_capped_orthant(wpart, 3.0);
        xn.tail(2 * f) = wpart;
      }
      xp = x;
      x = xn;
      t_acc = t_next;

      if ((it & 15) == 15) {
        const Vecd th = theta_of(x, sign);
        const Real val = th.dot(m * th);
        if (std::abs(prev_val - val) <= tol * std::max(1.0, std::abs(val))) {
          if (++flat >= 3) break;
        } else {
          flat = 0;
        }
        if (val > prev_val) t_acc = 1.0;  // objective restart
        prev_val = val;
      }
    }
    const Vecd th = theta_of(x, sign);
    best = std::min(best, th.dot(m * th));
    warm = x;
  }
  return s * std::max(best, 0.0);
}

// Minimum of the per-subset constant over all size-s subsets. Enumeration is
// capped at d <= 20 and s <= 4; beyond that the smallest eigenvalue of M is
// returned as a valid lower bound, flagged inexact.
inline CompatibilityResult compatibility_constant_s(const Matd& m, Index s,
                                                    Real tol = 1e-9,
                                                    long max_iters = 4000) {
  const Index d = m.rows();
  require(m.cols() == d, "compatibility_constant_s: M not square");
  require(s >= 1 && s <= d, "compatibility_constant_s: s outside [1, d]");
  if (d > 20 || s > 4) {
    Eigen::SelfAdjointEigenSolver<Matd> es(m, Eigen::EigenvaluesOnly);
    return {std::max(es.eigenvalues().minCoeff(), 0.0), false};
  }

  std::vector<Index> subset(s);
  for (Index k = 0; k < s; ++k) subset[k] = k;
  Real best = std::numeric_limits<Real>::infinity();
  while (true) {
    best = std::min(best, compatibility_constant(m, subset, tol, max_iters));
    // Next combination in lexicographic order.
    Index k = s;
    while (k-- > 0) {
      if (subset[k] < d - (s - k)) {
        ++subset[k];
        for (Index j = k + 1; j < s; ++j) subset[j] = subset[j - 1] + 1;
        break;
      }
      if (k == 0) return {best, true};
    }
  }
}

}  // namespace sbai

#endif  // SBAI_COMPATIBILITY_HPP_

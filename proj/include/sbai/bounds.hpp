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

#ifndef SBAI_BOUNDS_HPP_
#define SBAI_BOUNDS_HPP_

#include <algorithm>
#include <cmath>

#include "sbai/common.hpp"

namespace sbai {

// A probability bound of the form prefactor * exp(-exponent), clipped to 1.
struct BoundValue {
  Real value = 1;
  Real exponent = 0;
  Real prefactor = 0;
};

namespace detail {

inline Real clip_prob(Real p) { return std::min(p, Real{1}); }

}  // namespace detail

// Probability that thresholded-lasso screening misses part of the support,
// after t1 design-allocated pulls with penalty lambda_init. x2max is the
// largest design-weighted squared column norm of the arm matrix.
inline BoundValue support_recovery_bound(long t1, Real lambda_init, Index d,
                                         Real x2max) {
  require(t1 >= 1, "support_recovery_bound: t1 must be positive");
  require(d >= 1, "support_recovery_bound: d must be positive");
  require(x2max > 0, "support_recovery_bound: x2max must be positive");
  require(lambda_init >= 0, "support_recovery_bound: negative lambda");
  BoundValue out;
  out.prefactor = 2.0 * d;
  out.exponent = t1 * lambda_init * lambda_init / (32.0 * x2max);
  out.value = detail::clip_prob(out.prefactor * std::exp(-out.exponent));
  return out;
}

// Error probability of phased elimination with a dimension-halving schedule,
// in terms of the top-d hardness of the instance.
inline BoundValue elimination_bound(Index K, Index d, long T,
                                    Real hardness_full) {
  require(K >= 2, "elimination_bound: need at least two arms");
  require(d >= 2, "elimination_bound: need dimension >= 2");
  require(hardness_full > 0, "elimination_bound: hardness must be positive");
  Index rounds = 0;
  while ((Index{1} << rounds) < d) ++rounds;
  const long t_round = T / rounds;
  require(t_round >= 1, "elimination_bound: budget below the round count");
  BoundValue out;
  const Real tr = static_cast<Real>(t_round);
  out.prefactor = K + std::log2(static_cast<Real>(d));
  out.exponent = tr / (16.0 * (1.0 + d * static_cast<Real>(d) / tr) *
                       hardness_full);
  out.value = detail::clip_prob(out.prefactor * std::exp(-out.exponent));
  return out;
}

struct TheoryInputs {
  Index num_arms = 0;
  Index dim = 0;
  Index sparsity = 0;
  long budget = 0;       // total pulls T
  long exploration = 0;  // screening pulls t1
  Real lambda_init = 0;
  Real lambda_thres = 0;
  Real compat = 0;  // compatibility constant of the screening design
  Real x2max = 0;
  Real theta_min = 0;
  Real hardness_full = 0;    // hardness over the top d arms
  Real hardness_screen = 0;  // hardness over the top s1 arms
};

struct TwoPhaseBound {
  BoundValue total;
  Real screen_term = 1;
  Real elim_term = 1;
  Real screen_exponent = 0;
  Real elim_exponent = 0;
  long s1 = 0;  // worst-case support size surviving the threshold
  bool hypothesis_ok = false;
};

// Size cap on the screened support under the threshold-to-penalty ratio c.
inline long screened_support_cap(Index s, Real b, Real c) {
  require(s >= 1 && b > 0 && c > 0, "screened_support_cap: bad parameters");
  return static_cast<long>(std::floor(s * (1.0 + b / c) + 1e-9));
}

// Error probability of screening followed by phased elimination on the
// screened coordinates. Vacuous (value 1) when the detectability hypothesis
// theta_min >= lambda_init (c + b s) fails.
inline TwoPhaseBound two_phase_bound(const TheoryInputs& in) {
  require(in.num_arms >= 2, "two_phase_bound: need at least two arms");
  require(in.dim >= 2, "two_phase_bound: need dimension >= 2");
  require(in.sparsity >= 1, "two_phase_bound: sparsity must be positive");
  require(in.compat > 0, "two_phase_bound: compatibility must be positive");
  require(in.lambda_init > 0 && in.lambda_thres > 0,
          "two_phase_bound: penalties must be positive");
  require(in.exploration >= 1 && in.budget > in.exploration,
          "two_phase_bound: invalid budget split");
  require(in.hardness_screen > 0, "two_phase_bound: hardness must be positive");
  require(in.x2max > 0, "two_phase_bound: x2max must be positive");

  const Real b = 4.0 / in.compat;
  const Real c = in.lambda_thres / in.lambda_init;
  TwoPhaseBound out;
  out.s1 = screened_support_cap(in.sparsity, b, c);
  out.hypothesis_ok =
      in.theta_min >= in.lambda_init * (c + b * in.sparsity) * (1.0 - 1e-9);

  const BoundValue screen = support_recovery_bound(
      in.exploration, in.lambda_init, in.dim, in.x2max);
  out.screen_exponent = screen.exponent;
  out.screen_term = screen.value;

  const long t2 = in.budget - in.exploration;
  const Real span = std::max(std::log2(static_cast<Real>(out.s1)), Real{1});
  const Real rounds_budget = std::floor(t2 / span);
  const Real eps = static_cast<Real>(out.s1) * out.s1 / t2;
  out.elim_exponent =
      rounds_budget / (16.0 * (1.0 + eps) * in.hardness_screen);
  out.elim_term = detail::clip_prob(
      (in.num_arms + std::log2(static_cast<Real>(in.dim))) *
      std::exp(-out.elim_exponent));

  out.total.prefactor =
      2.0 * in.dim + in.num_arms + std::log2(static_cast<Real>(in.dim));
  out.total.exponent = std::min(out.screen_exponent, out.elim_exponent);
  out.total.value = out.hypothesis_ok
                        ? detail::clip_prob(out.screen_term + out.elim_term)
                        : Real{1};
  return out;
}

struct AnalyticalHyperparameters {
  Real kappa = 0;
  Real lambda_init = 0;
  Real lambda_thres = 0;
  Real c0 = 0;
  long t1 = 0;
  long t2 = 0;
  long s1 = 0;
  bool hypothesis_ok = false;
};

// Closed-form penalty and split choices driven by b = 4 / compatibility and
// the smallest detectable coefficient. The built-in detectability margin
// covers only s >= 2; for s = 1 hypothesis_ok comes back false.
inline AnalyticalHyperparameters analytical_hyperparameters(Real b,
                                                            Real theta_min,
                                                            Index s,
                                                            Real x2max,
                                                            long T) {
  require(b > 0, "analytical_hyperparameters: b must be positive");
  require(theta_min > 0, "analytical_hyperparameters: theta_min must be positive");
  require(s >= 1, "analytical_hyperparameters: s must be positive");
  require(x2max > 0, "analytical_hyperparameters: x2max must be positive");
  require(T >= 2, "analytical_hyperparameters: budget too small");

  AnalyticalHyperparameters out;
  const Real s1_real = static_cast<Real>(s) + static_cast<Real>(s) * s;
  out.kappa = (25.0 / 24.0) * b * b / (theta_min * theta_min);
  out.lambda_init = 1.0 / std::sqrt(out.kappa * s1_real);
  out.lambda_thres = (b / s) * out.lambda_init;
  out.c0 = 25.0 * b * b * x2max /
           (3.0 * theta_min * theta_min * std::log2(s1_real));
  out.t1 = std::lround(T * out.c0 / (1.0 + out.c0));
  out.t1 = std::clamp<long>(out.t1, 1, T - 1);
  out.t2 = T - out.t1;
  out.s1 = screened_support_cap(s, b, b / s);
  const Real c = b / s;
  out.hypothesis_ok =
      theta_min >= out.lambda_init * (c + b * s) * (1.0 - 1e-9);
  return out;
}

// Budget split equating the screening and elimination exponents (both phases
// equally unlikely to fail); falls back to an extreme split when one phase
// dominates for every division of the budget.
inline long balanced_phase_split(Real lambda_init, Real x2max, long s1,
                                 Real hardness_screen, long T) {
  require(lambda_init > 0 && x2max > 0, "balanced_phase_split: bad penalties");
  require(s1 >= 1 && hardness_screen > 0 && T >= 2,
          "balanced_phase_split: bad inputs");
  const Real span = std::max(std::log2(static_cast<Real>(s1)), Real{1});
  const auto screen_exp = [&](Real t1) {
    return t1 * lambda_init * lambda_init / (32.0 * x2max);
  };
  const auto elim_exp = [&](Real t2) {
    return t2 * t2 /
           (16.0 * span * hardness_screen *
            (t2 + static_cast<Real>(s1) * s1));
  };
  Real lo = 1, hi = static_cast<Real>(T - 1);
  if (elim_exp(lo) - screen_exp(T - lo) >= 0) return T - 1;
  if (elim_exp(hi) - screen_exp(T - hi) <= 0) return 1;
  for (int it = 0; it < 200; ++it) {
    const Real mid = 0.5 * (lo + hi);
    (elim_exp(mid) - screen_exp(T - mid) >= 0 ? hi : lo) = mid;
  }
  const long t2_a = std::clamp<long>(std::lround(lo), 1, T - 1);
  const auto worst = [&](long t2) {
    return std::min(screen_exp(static_cast<Real>(T - t2)),
                    elim_exp(static_cast<Real>(t2)));
  };
  long best = t2_a;
  for (long cand : {t2_a - 1, t2_a + 1})
    if (cand >= 1 && cand <= T - 1 && worst(cand) > worst(best)) best = cand;
  return T - best;
}

// Single-expression error bound for the two-phase pipeline at the
// closed-form budget split.
inline BoundValue combined_bound(Index K, Index d, Index s, long T, Real c0,
                                 Real hardness_screen) {
  require(K >= 2 && d >= 2 && s >= 1, "combined_bound: bad instance shape");
  require(T >= 1 && c0 > 0 && hardness_screen > 0,
          "combined_bound: bad parameters");
  const Real s1 = static_cast<Real>(s) + static_cast<Real>(s) * s;
  const Real eps = (1.0 + c0) * s1 * s1 / T;
  const Real span = std::floor(std::log2(s1));
  BoundValue out;
  out.prefactor = K + std::log2(static_cast<Real>(d)) + 2.0 * d;
  out.exponent =
      T / (16.0 * span * (1.0 + eps) * hardness_screen * (1.0 + c0));
  out.value = detail::clip_prob(out.prefactor * std::exp(-out.exponent));
  return out;
}

// Single-expression error bound for the robust-screening pipeline with
// screening share c_pa.
inline BoundValue robust_two_phase_bound(Index K, Index d, Index s, long T,
                                         Real c_pa, Real hardness_s) {
  require(K >= 2 && d >= 2 && s >= 2, "robust_two_phase_bound: bad shape");
  require(T >= 1 && c_pa > 0 && hardness_s > 0,
          "robust_two_phase_bound: bad parameters");
  const Real eps = (1.0 + c_pa) * static_cast<Real>(s) * s / T;
  const Real span = std::floor(std::log2(static_cast<Real>(s)));
  BoundValue out;
  out.prefactor = K + std::log2(static_cast<Real>(d)) + 2.0 * d;
  out.exponent =
      T / (16.0 * std::max(span, Real{1}) * (1.0 + eps) * hardness_s *
           (1.0 + c_pa));
  out.value = detail::clip_prob(out.prefactor * std::exp(-out.exponent));
  return out;
}

}  // namespace sbai

#endif  // SBAI_BOUNDS_HPP_

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

#ifndef SBAI_ALGORITHMS_HPP_
#define SBAI_ALGORITHMS_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sbai/allocation.hpp"
#include "sbai/designs.hpp"
#include "sbai/instance.hpp"
#include "sbai/popart.hpp"
#include "sbai/sparse.hpp"

namespace sbai {

enum class AllocationRule {
  kWorstCase,    // minimize the worst predicted variance over arms
  kDifferences,  // minimize the worst predicted variance over arm differences
};

struct RoundRecord {
  std::vector<Index> active_arms;  // arms entering the round, original indices
  Index dim = 0;                   // working dimension during the round
  Veci pulls;                      // per entry of active_arms
  long budget = 0;
};

struct AlgorithmOutcome {
  Index chosen_arm = 0;
  long phase1_budget = 0;
  long phase2_budget = 0;
  std::optional<std::vector<Index>> support_found;
  bool used_support = false;
  std::vector<RoundRecord> rounds;
};

namespace detail {

inline Index ceil_log2(Index n) {
  Index r = 0;
  while ((Index{1} << r) < n) ++r;
  return r;
}

// Moore-Penrose solve of V x = b for symmetric PSD V.
inline Vecd pinv_solve(const Matd& v, const Vecd& b) {
  Eigen::SelfAdjointEigenSolver<Matd> es(v);
  const Vecd& ev = es.eigenvalues();
  const Real cutoff = std::max(ev.cwiseAbs().maxCoeff(), Real{1}) * 1e-12;
  Vecd coefs = es.eigenvectors().transpose() * b;
  for (Index i = 0; i < ev.size(); ++i)
    coefs[i] = ev[i] > cutoff ? coefs[i] / ev[i] : 0.0;
  return es.eigenvectors() * coefs;
}

// Phased elimination over feature vectors. Row k of `vectors` is the feature
// representation of arm `arm_ids[k]`; rewards are always drawn against the
// original instance so a wrong feature projection degrades estimates without
// corrupting the environment.
inline AlgorithmOutcome phased_elimination(
    const Matd& vectors, const std::vector<Index>& arm_ids,
    const BanditInstance& inst, long T, Index num_rounds,
    const std::function<Index(Index)>& target_size, AllocationRule rule,
    Rng& rng, Real design_tol, long design_iters) {
  AlgorithmOutcome out;
  const Index K = vectors.rows();
  require(K >= 1 && static_cast<Index>(arm_ids.size()) == K,
          "elimination: arm index map does not match the feature rows");
  if (K == 1) {
    out.chosen_arm = arm_ids[0];
    return out;
  }

  const long per_round = T / num_rounds;
  if (per_round < 1)
    throw InfeasibleBudget("elimination: budget smaller than the round count");

  std::vector<Index> active(K);
  std::iota(active.begin(), active.end(), 0);
  Matd feats = vectors;

  for (Index r = 1; r <= num_rounds; ++r) {
    const long t_r =
        r < num_rounds ? per_round : T - (num_rounds - 1) * per_round;
    const Index m = static_cast<Index>(active.size());

    Matd act(m, feats.cols());
    for (Index i = 0; i < m; ++i) act.row(i) = feats.row(active[i]);

    // Reduce to the span of the active arms when it drops below the ambient
    // dimension; estimates are invariant to this change of basis.
    if (m < act.cols() || numerical_rank(act) < act.cols()) {
      Eigen::JacobiSVD<Matd> svd(act,
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Real top = svd.singularValues().size() > 0
                           ? svd.singularValues()[0]
                           : Real{0};
      Index rank = 0;
      for (Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > std::max(top * 1e-10, Real{1e-300}))
          ++rank;
      rank = std::max<Index>(rank, 1);
      act = act * svd.matrixV().leftCols(rank);
    }

    Vecd weights;
    if (m == 1) {
      weights = Vecd::Ones(1);
    } else if (rule == AllocationRule::kWorstCase) {
      weights = g_optimal_design(act, design_tol, design_iters).weights;
    } else {
      weights = xy_allocation(act, design_tol, design_iters).weights;
    }
    const Veci counts = round_allocation(weights, t_r);

    std::vector<Index> pull_list;
    pull_list.reserve(static_cast<size_t>(t_r));
    for (Index i = 0; i < m; ++i)
      for (int c = 0; c < counts[i]; ++c)
        pull_list.push_back(arm_ids[active[i]]);
    const Vecd rewards = sample_rewards(inst, pull_list, rng);

    Matd v = Matd::Zero(act.cols(), act.cols());
    Vecd score = Vecd::Zero(act.cols());
    long pos = 0;
    for (Index i = 0; i < m; ++i) {
      if (counts[i] > 0)
        v.noalias() +=
            counts[i] * act.row(i).transpose() * act.row(i);
      for (int c = 0; c < counts[i]; ++c)
        score.noalias() += act.row(i).transpose() * rewards[pos++];
    }
    const Vecd theta_hat = pinv_solve(v, score);
    const Vecd est = act * theta_hat;

    RoundRecord rec;
    rec.dim = act.cols();
    rec.pulls = counts;
    rec.budget = t_r;
    for (Index i = 0; i < m; ++i) rec.active_arms.push_back(arm_ids[active[i]]);
    out.rounds.push_back(std::move(rec));

    const Index keep = std::min<Index>(m, std::max<Index>(target_size(r), 1));
    std::vector<Index> order(m);
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (est[a] != est[b]) return est[a] > est[b];
      return a < b;
    });
    order.resize(keep);
    std::sort(order.begin(), order.end());
    std::vector<Index> next;
    next.reserve(keep);
    for (Index i : order) next.push_back(active[i]);
    active.swap(next);
  }

  require(active.size() == 1, "elimination: schedule left several candidates");
  out.chosen_arm = arm_ids[active[0]];
  return out;
}

inline long trace_budget(const AlgorithmOutcome& out) {
  long total = 0;
  for (const RoundRecord& r : out.rounds) total += r.budget;
  return total;
}

}  // namespace detail

// Phased elimination with G-optimal or difference-based allocations, halving
// the candidate set on a dimension-driven schedule.
inline AlgorithmOutcome od_linbai(const BanditInstance& inst, long T, Rng& rng,
                                  AllocationRule rule = AllocationRule::kWorstCase,
                                  Real design_tol = 1e-5,
                                  long design_iters = 4000) {
  const Index d = inst.dim();
  const Index rounds = std::max<Index>(detail::ceil_log2(d), 1);
  std::vector<Index> ids(inst.num_arms());
  std::iota(ids.begin(), ids.end(), Index{0});
  AlgorithmOutcome out = detail::phased_elimination(
      inst.arms, ids, inst, T, rounds,
      [d](Index r) {
        return static_cast<Index>(
            (d + (Index{1} << r) - 1) / (Index{1} << r));
      },
      rule, rng, design_tol, design_iters);
  out.phase2_budget = detail::trace_budget(out);
  return out;
}

// Phased elimination on an arm-count-driven schedule: half the surviving arms
// leave after every round, regardless of dimension.
inline AlgorithmOutcome gse(const BanditInstance& inst, long T, Rng& rng,
                            AllocationRule rule = AllocationRule::kWorstCase,
                            Real design_tol = 1e-5, long design_iters = 4000) {
  const Index K = inst.num_arms();
  const Index rounds = std::max<Index>(detail::ceil_log2(K), 1);
  std::vector<Index> ids(K);
  std::iota(ids.begin(), ids.end(), Index{0});
  AlgorithmOutcome out = detail::phased_elimination(
      inst.arms, ids, inst, T, rounds,
      [K](Index r) {
        return static_cast<Index>(
            (K + (Index{1} << r) - 1) / (Index{1} << r));
      },
      rule, rng, design_tol, design_iters);
  out.phase2_budget = detail::trace_budget(out);
  return out;
}

struct TwoPhaseConfig {
  long t1 = 0;
  Real lambda_init = 0;
  Real lambda_thres = 0;
  AllocationRule rule = AllocationRule::kWorstCase;
  Real design_tol = 1e-5;
  long design_iters = 4000;
};

// Exploration-phase pulls: counts[k] consecutive entries of `rewards` belong
// to arm k, in ascending arm order.
struct PhaseOneData {
  Veci counts;
  Vecd rewards;
};

// Pull t1 samples from the smallest-eigenvalue-optimal design. Kept separate
// from the two-phase run so penalties can be tuned on the same data that the
// final fit will see.
inline PhaseOneData collect_phase_one(const BanditInstance& inst, long t1,
                                      Rng& rng, Real design_tol = 1e-5,
                                      long design_iters = 100000) {
  require(t1 >= 1, "collect_phase_one: budget must be positive");
  PhaseOneData out;
  const Allocation design =
      e_optimal_design(inst.arms, design_tol, design_iters);
  out.counts = round_allocation(design.weights, t1);
  std::vector<Index> pull_list;
  pull_list.reserve(static_cast<size_t>(t1));
  for (Index k = 0; k < inst.num_arms(); ++k)
    for (int c = 0; c < out.counts[k]; ++c) pull_list.push_back(k);
  out.rewards = sample_rewards(inst, pull_list, rng);
  return out;
}

// Expand exploration pulls to regression rows (one row per pull).
inline RegressionProblem phase_one_problem(const BanditInstance& inst,
                                           const PhaseOneData& data) {
  const long n = data.counts.sum();
  RegressionProblem p;
  p.X.resize(n, inst.dim());
  p.y.resize(n);
  long pos = 0;
  for (Index k = 0; k < inst.num_arms(); ++k)
    for (int c = 0; c < data.counts[k]; ++c) {
      p.X.row(pos) = inst.arms.row(k);
      p.y[pos] = data.rewards[pos];
      ++pos;
    }
  return p;
}

namespace detail {

// Run phased elimination on the coordinates in `support`; an empty or
// degenerate support falls back to the full feature space.
inline AlgorithmOutcome elimination_on_support(
    const BanditInstance& inst, const std::vector<Index>& support, long t2,
    AllocationRule rule, Rng& rng, Real design_tol, long design_iters,
    bool* used_support) {
  const Index K = inst.num_arms();
  std::vector<Index> ids(K);
  std::iota(ids.begin(), ids.end(), Index{0});

  Matd feats;
  Index dim_for_schedule = 0;
  *used_support = false;
  if (!support.empty()) {
    feats.resize(K, static_cast<Index>(support.size()));
    for (Index j = 0; j < static_cast<Index>(support.size()); ++j)
      feats.col(j) = inst.arms.col(support[j]);
    if (feats.cwiseAbs().maxCoeff() > 0) {
      *used_support = true;
      dim_for_schedule = feats.cols();
    }
  }
  if (!*used_support) {
    feats = inst.arms;
    dim_for_schedule = inst.dim();
  }
  const Index rounds = std::max<Index>(ceil_log2(dim_for_schedule), 1);
  const Index d = dim_for_schedule;
  return phased_elimination(
      feats, ids, inst, t2, rounds,
      [d](Index r) {
        return static_cast<Index>(
            (d + (Index{1} << r) - 1) / (Index{1} << r));
      },
      rule, rng, design_tol, design_iters);
}

}  // namespace detail

// Two-phase algorithm: an exploration phase on the smallest-eigenvalue-optimal
// design feeds a thresholded lasso, then phased elimination runs on the
// selected coordinates with the remaining budget.
inline AlgorithmOutcome lasso_od(const BanditInstance& inst, long T,
                                 const TwoPhaseConfig& cfg, Rng& rng,
                                 const PhaseOneData* collected = nullptr) {
  require(cfg.t1 >= 1, "lasso_od: exploration budget must be positive");
  require(cfg.lambda_init > 0, "lasso_od: lambda_init must be positive");
  require(cfg.lambda_thres >= 0, "lasso_od: lambda_thres must be nonnegative");
  if (T - cfg.t1 < 1)
    throw InfeasibleBudget("lasso_od: no budget left after exploration");

  const Matd& arms = inst.arms;
  const Index d = inst.dim();
  const Index K = inst.num_arms();

  PhaseOneData local;
  if (collected == nullptr) {
    local = collect_phase_one(inst, cfg.t1, rng, cfg.design_tol);
    collected = &local;
  }
  const Veci& counts = collected->counts;
  require(counts.size() == K && counts.sum() == cfg.t1 &&
              collected->rewards.size() == cfg.t1,
          "lasso_od: exploration data does not match t1");

  Matd g = Matd::Zero(d, d);
  Vecd c = Vecd::Zero(d);
  long pos = 0;
  for (Index k = 0; k < K; ++k) {
    if (counts[k] > 0)
      g.noalias() += counts[k] * arms.row(k).transpose() * arms.row(k);
    for (int i = 0; i < counts[k]; ++i)
      c.noalias() += arms.row(k).transpose() * collected->rewards[pos++];
  }
  g /= static_cast<Real>(cfg.t1);
  c /= static_cast<Real>(cfg.t1);

  const LassoResult fit = lasso_gram(g, c, cfg.lambda_init);
  const SparseEstimate est =
      threshold(fit.theta, cfg.lambda_thres, cfg.lambda_init);

  AlgorithmOutcome out;
  RoundRecord phase1;
  phase1.dim = d;
  phase1.pulls = counts;
  phase1.budget = cfg.t1;
  phase1.active_arms.resize(K);
  std::iota(phase1.active_arms.begin(), phase1.active_arms.end(), Index{0});

  bool used_support = false;
  AlgorithmOutcome phase2 = detail::elimination_on_support(
      inst, est.support, T - cfg.t1, cfg.rule, rng, cfg.design_tol,
      cfg.design_iters, &used_support);

  out.chosen_arm = phase2.chosen_arm;
  out.phase1_budget = cfg.t1;
  out.phase2_budget = T - cfg.t1;
  out.support_found = est.support;
  out.used_support = used_support;
  out.rounds.push_back(std::move(phase1));
  for (RoundRecord& r : phase2.rounds) out.rounds.push_back(std::move(r));
  return out;
}

inline AlgorithmOutcome lasso_xy(const BanditInstance& inst, long T,
                                 TwoPhaseConfig cfg, Rng& rng,
                                 const PhaseOneData* collected = nullptr) {
  cfg.rule = AllocationRule::kDifferences;
  return lasso_od(inst, T, cfg, rng, collected);
}

// Two-phase algorithm with robust screening: coordinate-wise Catoni estimates
// on a min-max-diagonal design select the support, then phased elimination
// spends the remaining budget there.
inline AlgorithmOutcome popart_od(const BanditInstance& inst, long T,
                                  Real theta_min, Index s, Rng& rng,
                                  AllocationRule rule = AllocationRule::kWorstCase,
                                  Real design_tol = 1e-6,
                                  long design_iters = 20000) {
  const PopArtEstimate scr =
      popart_estimate(inst, T, theta_min, s, rng, design_tol, design_iters);
  if (scr.config.t2 < 1)
    throw InfeasibleBudget("popart_od: screening consumed the whole budget");

  AlgorithmOutcome out;
  RoundRecord phase1;
  phase1.dim = inst.dim();
  phase1.pulls = scr.pull_counts;
  phase1.budget = scr.config.t1;
  phase1.active_arms.resize(inst.num_arms());
  std::iota(phase1.active_arms.begin(), phase1.active_arms.end(), Index{0});

  bool used_support = false;
  AlgorithmOutcome phase2 = detail::elimination_on_support(
      inst, scr.support, scr.config.t2, rule, rng, 1e-5, 4000, &used_support);

  out.chosen_arm = phase2.chosen_arm;
  out.phase1_budget = scr.config.t1;
  out.phase2_budget = scr.config.t2;
  out.support_found = scr.support;
  out.used_support = used_support;
  out.rounds.push_back(std::move(phase1));
  for (RoundRecord& r : phase2.rounds) out.rounds.push_back(std::move(r));
  return out;
}

}  // namespace sbai

#endif  // SBAI_ALGORITHMS_HPP_

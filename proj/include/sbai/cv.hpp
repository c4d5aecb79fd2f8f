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

#ifndef SBAI_CV_HPP_
#define SBAI_CV_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sbai/rng.hpp"
#include "sbai/sparse.hpp"

namespace sbai {

struct CvOptions {
  Index folds = 5;
  int repeats = 3;      // independent fold shuffles averaged per candidate
  int refinements = 3;  // coordinate-search passes, each narrowing the grids
  Index grid_points = 12;
  Real grid_lo = 1e-3;
  Real grid_hi = 1.0;
  Real missing_penalty = 200.0;  // charged when the support comes up short
  Real excess_penalty = 5.0;     // charged per kept coordinate beyond s
  Real lasso_tol = 1e-6;
  long lasso_iters = 20000;
};

struct CvChoice {
  Real lambda_init = 0;
  Real lambda_thres = 0;
  Real loss = 0;
};

inline Vecd geometric_grid(Real lo, Real hi, Index n) {
  require(lo > 0 && hi >= lo && n >= 1, "geometric_grid: bad range");
  Vecd g(n);
  if (n == 1) {
    g[0] = std::sqrt(lo * hi);
    return g;
  }
  const Real step = std::log(hi / lo) / (n - 1);
  for (Index i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
  return g;
}

namespace detail {

inline uint64_t uniform_index(Rng& rng, uint64_t k) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % k;
  uint64_t r = rng.next_u64();
  while (r >= limit) r = rng.next_u64();
  return r % k;
}

struct CvFold {
  Matd gram;
  Vecd corr;
  std::vector<Index> holdout;
  LassoState state;
};

}  // namespace detail

// Penalty selection by repeated k-fold cross-validation. The fold loss is the
// held-out squared error of the thresholded fit plus penalties that steer the
// kept support towards size s; a coordinate search alternates between the two
// penalties on geometric grids that narrow around the incumbent.
inline CvChoice cv_tune(const RegressionProblem& data, Index s,
                        const CvOptions& opt, Rng& rng) {
  const Index n = data.X.rows();
  const Index d = data.X.cols();
  require(n == data.y.size(), "cv_tune: design and response sizes differ");
  require(opt.folds >= 2 && opt.folds <= n, "cv_tune: folds outside [2, n]");
  require(s >= 1, "cv_tune: s must be positive");
  require(opt.repeats >= 1 && opt.refinements >= 1, "cv_tune: bad options");

  std::vector<detail::CvFold> folds;
  folds.reserve(static_cast<size_t>(opt.repeats) * opt.folds);
  for (int rep = 0; rep < opt.repeats; ++rep) {
    Rng shuffler = rng.split(static_cast<uint64_t>(1000 + rep));
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    for (Index i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[detail::uniform_index(
                    shuffler, static_cast<uint64_t>(i) + 1)]);
    for (Index f = 0; f < opt.folds; ++f) {
      detail::CvFold fold;
      std::vector<Index> train;
      for (Index i = 0; i < n; ++i)
        (i % opt.folds == f ? fold.holdout : train).push_back(perm[i]);
      Matd xt(static_cast<Index>(train.size()), d);
      Vecd yt(static_cast<Index>(train.size()));
      for (Index i = 0; i < static_cast<Index>(train.size()); ++i) {
        xt.row(i) = data.X.row(train[i]);
        yt[i] = data.y[train[i]];
      }
      fold.gram = xt.transpose() * xt / static_cast<Real>(train.size());
      fold.corr = xt.transpose() * yt / static_cast<Real>(train.size());
      folds.push_back(std::move(fold));
    }
  }

  const auto evaluate = [&](Real lambda_init, Real lambda_thres) {
    Real loss = 0;
    for (detail::CvFold& fold : folds) {
      const LassoResult fit =
          lasso_gram(fold.gram, fold.corr, lambda_init, opt.lasso_tol,
                     opt.lasso_tol * 1e-2, opt.lasso_iters, &fold.state);
      const SparseEstimate est =
          threshold(fit.theta, lambda_thres, lambda_init);
      Real mse = 0;
      for (Index i : fold.holdout) {
        const Real r = data.y[i] - data.X.row(i).dot(est.coefficients);
        mse += r * r;
      }
      mse /= static_cast<Real>(fold.holdout.size());
      const Index kept = static_cast<Index>(est.support.size());
      if (kept < s) mse += opt.missing_penalty;
      if (kept > s) mse += opt.excess_penalty * kept;
      loss += mse;
    }
    return loss / static_cast<Real>(folds.size());
  };

  Vecd init_grid = geometric_grid(opt.grid_lo, opt.grid_hi, opt.grid_points);
  Vecd thres_grid = init_grid;
  Real cur_init = init_grid[init_grid.size() / 2];
  Real cur_thres = thres_grid[thres_grid.size() / 2];
  CvChoice best;
  best.loss = std::numeric_limits<Real>::infinity();

  const auto consider = [&](Real li, Real lt, Real loss) {
    if (loss < best.loss) best = CvChoice{li, lt, loss};
  };
  const auto narrowed = [](const Vecd& grid, Real center) {
    const Real lo = grid[0], hi = grid[grid.size() - 1];
    const Real half = 0.25 * std::log(hi / lo);
    Real nlo = center * std::exp(-half);
    Real nhi = center * std::exp(half);
    nlo = std::max(nlo, Real{1e-6});
    nhi = std::min(std::max(nhi, nlo), Real{10.0});
    return geometric_grid(nlo, nhi, grid.size());
  };

  for (int pass = 0; pass < opt.refinements; ++pass) {
    Real best_here = std::numeric_limits<Real>::infinity();
    for (Index i = 0; i < init_grid.size(); ++i) {
      const Real loss = evaluate(init_grid[i], cur_thres);
      consider(init_grid[i], cur_thres, loss);
      if (loss < best_here) {
        best_here = loss;
        cur_init = init_grid[i];
      }
    }
    best_here = std::numeric_limits<Real>::infinity();
    for (Index i = 0; i < thres_grid.size(); ++i) {
      const Real loss = evaluate(cur_init, thres_grid[i]);
      consider(cur_init, thres_grid[i], loss);
      if (loss < best_here) {
        best_here = loss;
        cur_thres = thres_grid[i];
      }
    }
    if (pass + 1 < opt.refinements) {
      init_grid = narrowed(init_grid, cur_init);
      thres_grid = narrowed(thres_grid, cur_thres);
    }
  }
  return best;
}

}  // namespace sbai

#endif  // SBAI_CV_HPP_

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

#ifndef SBAI_POPART_HPP_
#define SBAI_POPART_HPP_

#include <cmath>
#include <vector>

#include "sbai/catoni.hpp"
#include "sbai/designs.hpp"
#include "sbai/instance.hpp"

namespace sbai {

// Derived constants of the robust screening phase. g < 1/2 always holds
// because lambda_pa^2 <= 2 h2_star.
struct PopArtConfig {
  Real h2_star = 0;
  Real lambda_pa = 0;
  Real g = 0;
  Real c_pa = 0;
  long t1 = 0;
  long t2 = 0;
  Vecd design;
};

struct PopArtEstimate {
  Vecd theta;
  std::vector<Index> support;
  Veci pull_counts;  // realized pulls per arm during screening
  PopArtConfig config;
};

inline PopArtConfig popart_config(const Matd& arms, Real theta_min, Index s,
                                  long total_T, Real design_tol = 1e-6,
                                  long design_iters = 20000) {
  require(theta_min > 0, "popart: theta_min must be positive");
  require(s >= 2, "popart: sparsity below 2 leaves the budget rule undefined");
  require(total_T >= 2, "popart: budget too small");
  const Index d = arms.cols();
  const Allocation a = minimax_variance_design(arms, Matd::Identity(d, d),
                                               design_tol, design_iters);
  PopArtConfig cfg;
  cfg.design = a.weights;
  cfg.h2_star = a.objective_value;
  cfg.lambda_pa = std::min(std::sqrt(2.0 * cfg.h2_star), theta_min / 2.0);
  cfg.g = cfg.lambda_pa * cfg.lambda_pa / (8.0 * cfg.h2_star);
  cfg.c_pa = 2.0 * cfg.h2_star /
             (cfg.lambda_pa * cfg.lambda_pa * s *
              std::log2(static_cast<Real>(s)));
  cfg.t1 = static_cast<long>(
      std::ceil(total_T * cfg.c_pa / (1.0 + cfg.c_pa) - 1e-12));
  cfg.t1 = std::min(cfg.t1, total_T);
  cfg.t2 = total_T - cfg.t1;
  return cfg;
}

// Screening by coordinate-wise robust estimation: sample arms i.i.d. from the
// min-max-diagonal design, form one-sample unbiased estimates through the
// population Gram inverse, and aggregate each coordinate with the Catoni
// estimator before thresholding.
inline PopArtEstimate popart_estimate(const BanditInstance& inst, long total_T,
                                      Real theta_min, Index s, Rng& rng,
                                      Real design_tol = 1e-6,
                                      long design_iters = 20000) {
  const Matd& arms = inst.arms;
  const Index d = arms.cols();
  const Index K = arms.rows();
  if (detail::numerical_rank(arms) < d)
    throw RankDeficient("popart: arms do not span the space");

  PopArtEstimate out;
  out.config =
      popart_config(arms, theta_min, s, total_T, design_tol, design_iters);
  const PopArtConfig& cfg = out.config;

  const Matd minv = gram(cfg.design, arms).inverse();
  const Vecd minv_diag = minv.diagonal();

  Matd samples(cfg.t1, d);
  out.pull_counts = Veci::Zero(K);
  const Vecd means = arms * inst.theta_star;
  for (long t = 0; t < cfg.t1; ++t) {
    const Index a = rng.discrete(cfg.design);
    ++out.pull_counts[a];
    const Real y = means[a] + inst.noise_sigma * rng.normal();
    samples.row(t) = (minv * arms.row(a).transpose()).transpose() * y;
  }

  const Real width = 1.0 + 2.0 * cfg.g / (1.0 - 2.0 * cfg.g);
  out.theta.resize(d);
  for (Index i = 0; i < d; ++i) {
    const Real alpha = std::sqrt(cfg.g / (minv_diag[i] * width));
    out.theta[i] = catoni(samples.col(i), alpha);
    if (std::abs(out.theta[i]) >= std::sqrt(8.0 * minv_diag[i] * cfg.g))
      out.support.push_back(i);
  }
  return out;
}

}  // namespace sbai

#endif  // SBAI_POPART_HPP_

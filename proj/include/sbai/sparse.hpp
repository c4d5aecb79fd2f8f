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

#ifndef SBAI_SPARSE_HPP_
#define SBAI_SPARSE_HPP_

#include <cmath>
#include <utility>
#include <vector>

#include "sbai/common.hpp"

namespace sbai {

struct RegressionProblem {
  Matd X;  // n x d, one sample per row
  Vecd y;
};

template <typename Scalar>
Scalar soft_threshold(Scalar v, Scalar k) {
  if (v > k) return v - k;
  if (v < -k) return v + k;
  return Scalar(0);
}

struct LassoResult {
  Vecd theta;
  Real kkt_residual = 0;
  long iters = 0;
  bool converged = false;
};

// Carries the splitting variables between solves so CV folds can warm-start.
struct LassoState {
  Vecd theta, z, u;
};

// Minimizer of (1/n)||y - X theta||^2 + lambda ||theta||_1, given only the
// normalized Gram statistics G = X'X/n and c = X'y/n. Alternating-direction
// splitting with unit penalty; the returned iterate is the sparse one.
inline LassoResult lasso_gram(const Matd& G, const Vecd& c, Real lambda,
                              Real tol_rel = 1e-6, Real tol_abs = 1e-8,
                              long max_iters = 100000,
                              LassoState* state = nullptr) {
  const Index d = G.rows();
  require(G.cols() == d && c.size() == d, "lasso: Gram shape mismatch");
  require(lambda >= 0, "lasso: negative penalty");
  constexpr Real rho = 1.0;

  Eigen::LLT<Matd> llt(2.0 * G + rho * Matd::Identity(d, d));
  if (llt.info() != Eigen::Success)
    throw Error("lasso: Gram system not positive definite");

  Vecd theta = Vecd::Zero(d), z = Vecd::Zero(d), u = Vecd::Zero(d);
  if (state && state->theta.size() == d) {
    theta = state->theta;
    z = state->z;
    u = state->u;
  }

  LassoResult out;
  const Real sqrt_d = std::sqrt(static_cast<Real>(d));
  for (long t = 1; t <= max_iters; ++t) {
    theta = llt.solve(2.0 * c + rho * (z - u));
    Vecd z_old = std::move(z);
    z = (theta + u).unaryExpr(
        [&](Real v) { return soft_threshold(v, lambda / rho); });
    u += theta - z;

    const Real r = (theta - z).norm();
    const Real sres = rho * (z - z_old).norm();
    const Real eps_pri =
        sqrt_d * tol_abs + tol_rel * std::max(theta.norm(), z.norm());
    const Real eps_dual = sqrt_d * tol_abs + tol_rel * rho * u.norm();
    out.iters = t;
    if (r <= eps_pri && sres <= eps_dual) {
      out.converged = true;
      break;
    }
  }
  if (state) {
    state->theta = theta;
    state->z = z;
    state->u = u;
  }

  out.theta = z;
  const Vecd grad = 2.0 * (G * out.theta - c);
  Real kkt = 0;
  for (Index j = 0; j < d; ++j) {
    if (out.theta[j] != 0.0)
      kkt = std::max(kkt, std::abs(grad[j] + lambda * (out.theta[j] > 0 ? 1.0
                                                                        : -1.0)));
    else
      kkt = std::max(kkt, std::max(0.0, std::abs(grad[j]) - lambda));
  }
  out.kkt_residual = kkt;
  return out;
}

inline LassoResult lasso(const RegressionProblem& problem, Real lambda,
                         Real tol_rel = 1e-6, Real tol_abs = 1e-8,
                         long max_iters = 100000, LassoState* state = nullptr) {
  const Index n = problem.X.rows();
  require(n >= 1 && problem.y.size() == n, "lasso: sample shape mismatch");
  const Matd G = (problem.X.transpose() * problem.X) / static_cast<Real>(n);
  const Vecd c = (problem.X.transpose() * problem.y) / static_cast<Real>(n);
  return lasso_gram(G, c, lambda, tol_rel, tol_abs, max_iters, state);
}

struct SparseEstimate {
  Vecd coefficients;
  std::vector<Index> support;  // ascending
  Real lambda_init = 0;
  Real lambda_thres = 0;
};

// Keep coordinates with |theta_j| >= lambda_thres (inclusive), zero the rest.
inline SparseEstimate threshold(const Vecd& theta, Real lambda_thres,
                                Real lambda_init = 0) {
  require(lambda_thres >= 0, "threshold: negative threshold");
  SparseEstimate out;
  out.coefficients = Vecd::Zero(theta.size());
  out.lambda_init = lambda_init;
  out.lambda_thres = lambda_thres;
  for (Index j = 0; j < theta.size(); ++j) {
    if (std::abs(theta[j]) >= lambda_thres) {
      out.coefficients[j] = theta[j];
      out.support.push_back(j);
    }
  }
  return out;
}

}  // namespace sbai

#endif  // SBAI_SPARSE_HPP_

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

#ifndef SBAI_DESIGNS_HPP_
#define SBAI_DESIGNS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbai/allocation.hpp"
#include "sbai/common.hpp"

namespace sbai {

namespace detail {

constexpr Real kInf = std::numeric_limits<Real>::infinity();

inline Index numerical_rank(const Matd& a) {
  Eigen::ColPivHouseholderQR<Matd> qr(a);
  return qr.rank();
}

// Upper bound on max_nu sigma_min(sum nu_i a_i a_i') from a feasible dual
// point: min over trace-one PSD W supported on `basis` of max_i b_i' W b_i,
// b_i = basis' a_i. Any W gives a valid bound; a short matrix mirror descent
// tightens it.
inline Real spectraplex_minimax_ub(const Matd& arms, const Matd& basis) {
  const Index m = basis.cols();
  const Matd b = arms * basis;
  const Real scale = std::max(b.rowwise().squaredNorm().maxCoeff(), 1e-300);
  Matd logw = Matd::Zero(m, m);
  Matd w = Matd::Identity(m, m) / static_cast<Real>(m);
  Real best = kInf;
  for (int it = 1; it <= 120; ++it) {
    const Vecd scores = (b * w).cwiseProduct(b).rowwise().sum();
    Index worst;
    const Real top = scores.maxCoeff(&worst);
    best = std::min(best, top);
    if (m == 1) break;
    logw -= (2.0 / (scale * std::sqrt(static_cast<Real>(it)))) *
            (b.row(worst).transpose() * b.row(worst));
    Eigen::SelfAdjointEigenSolver<Matd> es(logw);
    Vecd ev = (es.eigenvalues().array() - es.eigenvalues().maxCoeff()).exp();
    ev /= ev.sum();
    w = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  }
  return best;
}

}  // namespace detail

// Weights maximizing the smallest eigenvalue of the weighted second-moment
// matrix. Entropic mirror ascent on the simplex; steps sized by the gap to
// the best dual upper bound seen so far. If the arms do not span the space
// the objective is identically zero and the result is flagged degenerate.
inline Allocation e_optimal_design(const Matd& arms, Real tol = 1e-6,
                                   long max_iters = 100000) {
  const Index K = arms.rows();
  const Index d = arms.cols();
  require(K >= 1 && d >= 1, "e_optimal_design: empty arm set");
  require(arms.allFinite(), "e_optimal_design: non-finite arm entry");

  Allocation out;
  if (detail::numerical_rank(arms) < d) {
    out.weights = Vecd::Constant(K, 1.0 / K);
    out.objective_value = 0;
    out.certificate_gap = 0;
    out.degenerate = true;
    out.converged = true;
    return out;
  }

  const Real grad_scale =
      std::max(arms.rowwise().squaredNorm().maxCoeff(), 1e-300);
  Vecd nu = Vecd::Constant(K, 1.0 / K);
  Vecd nu_avg = nu;
  Vecd best_nu = nu;
  Real best_obj = -detail::kInf;
  Real ub = detail::kInf;

  const auto sigma_min_of = [&](const Vecd& v, Vecd* evec) {
    Eigen::SelfAdjointEigenSolver<Matd> es(gram(v, arms));
    if (evec) *evec = es.eigenvectors().col(0);
    return es.eigenvalues()[0];
  };

  long t = 1;
  for (; t <= max_iters; ++t) {
    Eigen::SelfAdjointEigenSolver<Matd> es(gram(nu, arms));
    const Real lmin = es.eigenvalues()[0];
    if (lmin > best_obj) {
      best_obj = lmin;
      best_nu = nu;
    }

    if (t % 25 == 1) {
      // Dual certificate from the near-minimal eigenspace of the incumbent.
      const Real edge = lmin + std::max(0.05 * std::abs(lmin), 1e-12);
      Index m = 1;
      while (m < d && es.eigenvalues()[m] <= edge) ++m;
      ub = std::min(ub, detail::spectraplex_minimax_ub(
                            arms, es.eigenvectors().leftCols(m)));
      if (ub - best_obj <= tol * std::max(ub, 1e-12)) break;
    }

    const Vecd g = (arms * es.eigenvectors().col(0)).array().square();
    Real eta;
    if (std::isfinite(ub) && ub > lmin) {
      eta = (ub - lmin) / (grad_scale * grad_scale);
      eta = std::min(eta, 20.0 / grad_scale);
    } else {
      eta = 2.0 / (grad_scale * std::sqrt(static_cast<Real>(t)));
    }
    nu = nu.array() * ((g.array() - g.maxCoeff()) * eta).exp();
    nu /= nu.sum();

    nu_avg += (nu - nu_avg) / static_cast<Real>(t + 1);
    if (t % 50 == 0) {
      const Real avg_obj = sigma_min_of(nu_avg, nullptr);
      if (avg_obj > best_obj) {
        best_obj = avg_obj;
        best_nu = nu_avg;
      }
    }
  }

  out.weights = best_nu;
  out.objective_value = best_obj;
  out.certificate_gap = std::isfinite(ub) ? std::max(ub - best_obj, 0.0)
                                          : detail::kInf;
  out.converged =
      std::isfinite(ub) && ub - best_obj <= tol * std::max(ub, 1e-12);
  return out;
}

// Weights minimizing the largest normalized arm variance a_i' M(pi)^{-1} a_i.
// Fedorov-Wynn steps with the closed-form step size, interleaved with pairwise
// weight exchanges between the extreme arms; at the optimum the largest
// variance equals the dimension, which is the convergence certificate.
inline Allocation g_optimal_design(const Matd& arms, Real tol = 1e-6,
                                   long max_iters = 100000) {
  const Index K = arms.rows();
  const Index d = arms.cols();
  require(K >= 1 && d >= 1, "g_optimal_design: empty arm set");
  require(arms.allFinite(), "g_optimal_design: non-finite arm entry");
  if (detail::numerical_rank(arms) < d)
    throw RankDeficient("g_optimal_design: arms do not span the space");

  Vecd pi = Vecd::Constant(K, 1.0 / K);
  Real kappa = 0;
  bool converged = false;
  for (long t = 1; t <= max_iters; ++t) {
    const Matd minv = gram(pi, arms).inverse();
    const Matd am = arms * minv;
    const Vecd var = am.cwiseProduct(arms).rowwise().sum();
    Index imax;
    kappa = var.maxCoeff(&imax);
    if (kappa / d - 1.0 <= tol) {
      converged = true;
      break;
    }
    if (t % 2 == 1) {
      const Real gamma = (kappa / d - 1.0) / (kappa - 1.0);
      pi *= (1.0 - gamma);
      pi[imax] += gamma;
    } else {
      Index jmin = -1;
      Real vmin = detail::kInf;
      for (Index j = 0; j < K; ++j)
        if (pi[j] > 1e-14 && var[j] < vmin) {
          vmin = var[j];
          jmin = j;
        }
      const Real cross = am.row(imax).dot(arms.row(jmin));
      const Real denom = 2.0 * (kappa * vmin - cross * cross);
      if (denom > 1e-18) {
        const Real delta = std::min((kappa - vmin) / denom, pi[jmin]);
        if (delta > 0) {
          pi[imax] += delta;
          pi[jmin] -= delta;
        }
      }
    }
    if (t % 128 == 0) pi /= pi.sum();
  }
  pi /= pi.sum();

  Allocation out;
  out.weights = pi;
  out.objective_value = kappa;
  out.certificate_gap = kappa / d - 1.0;
  out.converged = converged;
  return out;
}

// Weights minimizing the worst predicted variance max_y y' M(pi)^{-1} y over
// the given target rows. Frank-Wolfe with exact line search along each chosen
// arm; the gradient is averaged over near-active targets so symmetric optima
// do not stall the direction choice.
inline Allocation minimax_variance_design(const Matd& arms, const Matd& targets,
                                          Real tol = 1e-6,
                                          long max_iters = 100000) {
  const Index K = arms.rows();
  const Index d = arms.cols();
  require(targets.rows() >= 1 && targets.cols() == d,
          "minimax_variance_design: bad target set");
  if (detail::numerical_rank(arms) < d)
    throw RankDeficient("minimax_variance_design: arms do not span the space");

  Vecd pi = Vecd::Constant(K, 1.0 / K);
  Matd minv = gram(pi, arms).inverse();
  Real f = 0;
  Real gap = detail::kInf;
  bool converged = false;
  int stalled = 0;

  for (long t = 1; t <= max_iters; ++t) {
    const Matd ym = targets * minv;                        // rows y' M^{-1}
    const Vecd phi = ym.cwiseProduct(targets).rowwise().sum();
    f = phi.maxCoeff();

    // Average the gradient over targets within a whisker of the max.
    const Real active_edge = f * (1.0 - 1e-7);
    Vecd dir_score = Vecd::Zero(K);
    int active = 0;
    for (Index y = 0; y < targets.rows(); ++y) {
      if (phi[y] < active_edge) continue;
      const Vecd proj = arms * ym.row(y).transpose();      // a_i' M^{-1} y
      dir_score += proj.array().square().matrix();
      ++active;
    }
    dir_score /= active;

    Index imax;
    const Real top = dir_score.maxCoeff(&imax);
    gap = top - pi.dot(dir_score);
    if (gap <= tol * f) {
      converged = true;
      break;
    }

    // Exact line search along (1-g) pi + g e_imax using rank-one updates.
    const Vecd a = arms.row(imax).transpose();
    const Vecd ma = minv * a;
    const Real kappa_a = a.dot(ma);
    const Vecd psi = targets * ma;                         // y' M^{-1} a
    const auto eval = [&](Real g) {
      const Real beta = g / (1.0 - g);
      Real worst = -detail::kInf;
      for (Index y = 0; y < targets.rows(); ++y) {
        const Real v =
            (phi[y] - beta * psi[y] * psi[y] / (1.0 + beta * kappa_a)) /
            (1.0 - g);
        worst = std::max(worst, v);
      }
      return worst;
    };
    Real lo = 0.0, hi = 0.99;
    constexpr Real kGolden = 0.6180339887498949;
    Real x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
    Real f1 = eval(x1), f2 = eval(x2);
    for (int it = 0; it < 40; ++it) {
      if (f1 <= f2) {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - kGolden * (hi - lo);
        f1 = eval(x1);
      } else {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + kGolden * (hi - lo);
        f2 = eval(x2);
      }
    }
    const Real gstar = (lo + hi) / 2;
    if (gstar <= 0.0 || eval(gstar) >= f * (1.0 - 1e-14)) {
      if (++stalled > 30) break;
      continue;
    }
    stalled = 0;
    pi *= (1.0 - gstar);
    pi[imax] += gstar;
    minv = gram(pi, arms).inverse();
  }

  // Vertex steps flatten out near minimax optima; multiplicative subgradient
  // steps from the incumbent shave the remaining fraction of a percent.
  Vecd best_pi = pi;
  Real best_f = f;
  if (!converged) {
    const long polish =
        std::min<long>(max_iters, targets.rows() <= 2 * d ? 4000 : 500);
    for (long t = 1; t <= polish; ++t) {
      minv = gram(pi, arms).inverse();
      const Matd ym = targets * minv;
      const Vecd phi = ym.cwiseProduct(targets).rowwise().sum();
      const Real fc = phi.maxCoeff();
      if (fc < best_f) {
        best_f = fc;
        best_pi = pi;
      }
      const Real active_edge = fc * (1.0 - 1e-6);
      Vecd score = Vecd::Zero(K);
      int active = 0;
      for (Index y = 0; y < targets.rows(); ++y) {
        if (phi[y] < active_edge) continue;
        const Vecd proj = arms * ym.row(y).transpose();
        score += proj.array().square().matrix();
        ++active;
      }
      score /= active;
      gap = score.maxCoeff() - pi.dot(score);
      if (gap <= tol * fc) {
        converged = true;
        break;
      }
      const Real eta =
          1.0 / (std::max(score.maxCoeff(), 1e-300) *
                 std::sqrt(static_cast<Real>(t)));
      pi = pi.array() * ((score.array() - score.maxCoeff()) * eta).exp();
      pi /= pi.sum();
    }
    minv = gram(best_pi, arms).inverse();
    f = ((targets * minv).cwiseProduct(targets)).rowwise().sum().maxCoeff();
  }

  Allocation out;
  out.weights = best_pi;
  out.objective_value = f;
  out.certificate_gap = gap / std::max(f, 1e-300);
  out.converged = converged;
  return out;
}

// Target set of all pairwise arm differences; duplicate and zero rows are
// dropped. Identical-arm pairs carry no information about their ordering, so
// an all-zero difference set is an error.
inline Allocation xy_allocation(const Matd& arms, Real tol = 1e-6,
                                long max_iters = 100000) {
  const Index K = arms.rows();
  const Index d = arms.cols();
  require(K >= 2, "xy_allocation: need at least two arms");
  const Real scale = std::max(arms.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Index> keep_i, keep_j;
  for (Index i = 0; i < K; ++i)
    for (Index j = i + 1; j < K; ++j)
      if ((arms.row(i) - arms.row(j)).norm() > 1e-12 * scale) {
        keep_i.push_back(i);
        keep_j.push_back(j);
      }
  if (keep_i.empty())
    throw InvalidArgument("xy_allocation: all arm differences are zero");
  Matd targets(static_cast<Index>(keep_i.size()), d);
  for (Index r = 0; r < targets.rows(); ++r)
    targets.row(r) = arms.row(keep_i[r]) - arms.row(keep_j[r]);
  return minimax_variance_design(arms, targets, tol, max_iters);
}

}  // namespace sbai

#endif  // SBAI_DESIGNS_HPP_

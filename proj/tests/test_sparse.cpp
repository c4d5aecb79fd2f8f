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

#include "sbai/sparse.hpp"

#include <doctest.h>

#include "sbai/rng.hpp"

using namespace sbai;

namespace {

// Design whose columns are orthonormal after the 1/n normalization, so the
// shrinkage solution is available in closed form as the independent oracle.
RegressionProblem orthonormalized_problem(Index n, Index d, std::uint64_t seed) {
  Rng rng(seed, 0);
  Matd g(n, d);
  for (Index i = 0; i < n; ++i) g.row(i) = rng.normal_vector(d);
  const Matd q = Eigen::HouseholderQR<Matd>(g).householderQ() *
                 Matd::Identity(n, d);
  RegressionProblem p;
  p.X = std::sqrt(static_cast<Real>(n)) * q;
  p.y = rng.normal_vector(n);
  return p;
}

}  // namespace

TEST_CASE("scalar shrinkage") {
  CHECK(soft_threshold(1.2, 0.5) == doctest::Approx(0.7));
  CHECK(soft_threshold(-1.2, 0.5) == doctest::Approx(-0.7));
  CHECK(soft_threshold(0.3, 0.5) == 0.0);
  CHECK(soft_threshold(-0.5, 0.5) == 0.0);
}

TEST_CASE("lasso on an orthonormalized design is coordinate shrinkage") {
  RegressionProblem p;
  p.X = std::sqrt(2.0) * Matd::Identity(2, 2);
  p.y.resize(2);
  p.y << std::sqrt(2.0), 0.0;  // exact fit at theta = (1, 0)
  const LassoResult r = lasso(p, 0.5);
  CHECK(r.converged);
  CHECK(r.theta[0] == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(r.theta[1] == 0.0);
  CHECK(r.kkt_residual < 1e-5);
}

TEST_CASE("lasso matches the shrinkage oracle on random orthonormal designs") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const RegressionProblem p = orthonormalized_problem(12, 5, seed);
    const Real lambda = 0.3;
    const LassoResult r = lasso(p, lambda, 1e-9, 1e-11);
    const Vecd c = p.X.transpose() * p.y / 12.0;
    for (Index j = 0; j < 5; ++j)
      CHECK(r.theta[j] ==
            doctest::Approx(soft_threshold(c[j], lambda / 2)).epsilon(1e-6));
    CHECK(r.kkt_residual < 1e-6);
  }
}

TEST_CASE("zero response gives the exact zero estimate") {
  RegressionProblem p;
  p.X = Matd::Identity(3, 3);
  p.y = Vecd::Zero(3);
  const LassoResult r = lasso(p, 0.1);
  CHECK(r.theta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("vanishing penalty recovers least squares") {
  Rng rng(9, 9);
  Matd x(30, 4);
  for (Index i = 0; i < 30; ++i) x.row(i) = rng.normal_vector(4);
  RegressionProblem p{x, rng.normal_vector(30)};
  const LassoResult r = lasso(p, 1e-12, 1e-10, 1e-12);
  const Vecd ols =
      (p.X.transpose() * p.X).ldlt().solve(p.X.transpose() * p.y);
  CHECK((r.theta - ols).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("a penalty above the critical level zeroes everything") {
  Rng rng(13, 0);
  Matd x(20, 3);
  for (Index i = 0; i < 20; ++i) x.row(i) = rng.normal_vector(3);
  RegressionProblem p{x, rng.normal_vector(20)};
  const Vecd c = p.X.transpose() * p.y / 20.0;
  const LassoResult r = lasso(p, 2.0 * c.cwiseAbs().maxCoeff() * 1.05);
  CHECK(r.theta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the solution improves the penalized objective") {
  Rng rng(14, 0);
  Matd x(25, 6);
  for (Index i = 0; i < 25; ++i) x.row(i) = rng.normal_vector(6);
  RegressionProblem p{x, rng.normal_vector(25)};
  const Real lambda = 0.2;
  const auto objective = [&](const Vecd& th) {
    return (p.y - p.X * th).squaredNorm() / 25.0 + lambda * th.lpNorm<1>();
  };
  const LassoResult r = lasso(p, lambda);
  CHECK(objective(r.theta) <= objective(Vecd::Zero(6)) + 1e-12);
  const Vecd ols = (p.X.transpose() * p.X).ldlt().solve(p.X.transpose() * p.y);
  CHECK(objective(r.theta) <= objective(ols) + 1e-12);
}

TEST_CASE("warm starts do not change the answer") {
  const RegressionProblem p = orthonormalized_problem(16, 6, 42);
  LassoState state;
  const LassoResult cold = lasso(p, 0.25, 1e-8, 1e-10, 100000, &state);
  const LassoResult warm = lasso(p, 0.20, 1e-8, 1e-10, 100000, &state);
  const LassoResult fresh = lasso(p, 0.20, 1e-8, 1e-10);
  CHECK((warm.theta - fresh.theta).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(warm.iters <= fresh.iters);
  CHECK(cold.converged);
}

TEST_CASE("thresholding keeps boundary magnitudes inclusively") {
  Vecd theta(4);
  theta << 0.5, -0.2, 0.2, 0.19;
  const SparseEstimate e = threshold(theta, 0.2);
  CHECK(e.support == std::vector<Index>{0, 1, 2});
  CHECK(e.coefficients[1] == doctest::Approx(-0.2));
  CHECK(e.coefficients[3] == 0.0);
}

TEST_CASE("thresholding twice is the same as once") {
  Rng rng(15, 1);
  Vecd theta = rng.normal_vector(10);
  const SparseEstimate once = threshold(theta, 0.4);
  const SparseEstimate twice = threshold(once.coefficients, 0.4);
  CHECK(once.support == twice.support);
  CHECK(once.coefficients == twice.coefficients);
}

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

#include "sbai/compatibility.hpp"

#include <doctest.h>

#include "sbai/rng.hpp"

using namespace sbai;

namespace {

Matd random_psd(Index d, std::uint64_t seed, Index samples = 40) {
  Rng rng(seed, 0);
  Matd a(samples, d);
  for (Index i = 0; i < samples; ++i) a.row(i) = rng.normal_vector(d);
  return a.transpose() * a / static_cast<Real>(samples);
}

Real sigma_min(const Matd& m) {
  Eigen::SelfAdjointEigenSolver<Matd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// 2x2 case with |S| = 1 has a closed form: theta_1 = 1, theta_2 clamped
// minimizer of a scalar quadratic on [-3, 3].
Real closed_form_2x2(const Matd& m) {
  const Real t = std::clamp(-m(0, 1) / m(1, 1), -3.0, 3.0);
  return m(0, 0) + 2.0 * m(0, 1) * t + m(1, 1) * t * t;
}

}  // namespace

TEST_CASE("identity matrix has unit constant for any subset") {
  CHECK(compatibility_constant(Matd::Identity(5, 5), {0, 2}) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(compatibility_constant(Matd::Identity(3, 3), {0, 1, 2}) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(compatibility_constant(Matd::Identity(2, 2), {1}) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("diagonal scaling passes straight through a singleton subset") {
  Matd m = Matd::Zero(2, 2);
  m(0, 0) = 4.0;
  m(1, 1) = 1.0;
  CHECK(compatibility_constant(m, {0}) == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(compatibility_constant(m, {1}) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("a null direction inside the cone forces the constant to zero") {
  Matd m(2, 2);
  m << 1.0, -1.0, -1.0, 1.0;
  CHECK(compatibility_constant(m, {0}) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("singleton subsets match the clamped closed form") {
  for (std::uint64_t seed : {3, 4, 5, 6}) {
    const Matd m = random_psd(2, seed, 25);
    CHECK(compatibility_constant(m, {0}) ==
          doctest::Approx(closed_form_2x2(m)).epsilon(1e-5));
  }
}

TEST_CASE("the constant dominates the smallest eigenvalue") {
  Rng rng(55, 0);
  for (std::uint64_t seed : {10, 11, 12, 13, 14}) {
    const Matd m = random_psd(5, seed);
    std::vector<Index> S;
    for (Index j = 0; j < 5 && S.size() < 3; ++j)
      if (rng.uniform() < 0.5) S.push_back(j);
    if (S.empty()) S.push_back(0);
    CHECK(compatibility_constant(m, S) >= sigma_min(m) - 1e-8);
  }
}

TEST_CASE("the constant scales linearly with the matrix") {
  const Matd m = random_psd(4, 21);
  const Real base = compatibility_constant(m, {0, 2});
  CHECK(compatibility_constant(2.5 * m, {0, 2}) ==
        doctest::Approx(2.5 * base).epsilon(1e-5));
}

TEST_CASE("subset minimum picks the weakest direction") {
  Matd m = Matd::Zero(3, 3);
  m.diagonal() << 1.0, 2.0, 3.0;
  const CompatibilityResult r = compatibility_constant_s(m, 1);
  CHECK(r.exact);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));

  const CompatibilityResult id = compatibility_constant_s(Matd::Identity(4, 4), 2);
  CHECK(id.exact);
  CHECK(id.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("subset minimum dominates the smallest eigenvalue too") {
  const Matd m = random_psd(6, 77);
  const CompatibilityResult r = compatibility_constant_s(m, 2);
  CHECK(r.exact);
  CHECK(r.value >= sigma_min(m) - 1e-8);
}

TEST_CASE("enumeration caps fall back to the eigenvalue bound") {
  const Matd big = random_psd(21, 88, 60);
  const CompatibilityResult r = compatibility_constant_s(big, 2);
  CHECK_FALSE(r.exact);
  CHECK(r.value == doctest::Approx(sigma_min(big)).epsilon(1e-10));

  const Matd m = random_psd(10, 89);
  const CompatibilityResult r2 = compatibility_constant_s(m, 5);
  CHECK_FALSE(r2.exact);
}

TEST_CASE("domain checks") {
  const Matd m = Matd::Identity(12, 12);
  std::vector<Index> big;
  for (Index j = 0; j < 9; ++j) big.push_back(j);
  CHECK_THROWS_AS(compatibility_constant(m, big), InvalidArgument);
  CHECK_THROWS_AS(compatibility_constant(m, {12}), InvalidArgument);
  CHECK_THROWS_AS(compatibility_constant(m, {}), InvalidArgument);
  CHECK_THROWS_AS(compatibility_constant_s(m, 0), InvalidArgument);
}

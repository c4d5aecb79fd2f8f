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

#include "sbai/generators.hpp"

#include <cmath>

#include <doctest.h>

#include "sbai/instance.hpp"

namespace sbai {
namespace {

TEST_CASE("family A arms sit on the prescribed sphere") {
  GeneratorConfig cfg;
  cfg.num_arms = 40;
  cfg.dim = 12;
  cfg.sparsity = 3;
  Rng rng(1, 0);
  const BanditInstance inst = make_family_instance(Family::kA, cfg, rng);

  const Real radius = std::sqrt(12.0 / 3.0);
  for (Index k = 0; k < inst.num_arms(); ++k)
    CHECK(inst.arms.row(k).norm() == doctest::Approx(radius).epsilon(1e-12));
  for (Index j = 0; j < 3; ++j) CHECK(inst.theta_star[j] == 1.0);
  for (Index j = 3; j < 12; ++j) CHECK(inst.theta_star[j] == 0.0);
  CHECK(inst.s == 3);
  CHECK(inst.theta_min == 1.0);
  CHECK_FALSE(inst.misspecified);
}

TEST_CASE("family B interpolates between sparse and perturbed parameters") {
  GeneratorConfig cfg;
  cfg.num_arms = 30;
  cfg.dim = 10;
  cfg.sparsity = 2;

  SUBCASE("delta zero is exactly sparse") {
    Rng rng(2, 0);
    const BanditInstance inst = make_family_instance(Family::kB, cfg, rng);
    CHECK_FALSE(inst.misspecified);
    CHECK(support_of(inst.theta_star).size() == 2);
  }

  SUBCASE("positive delta fills every off-support coordinate") {
    cfg.delta = 0.025;
    Rng rng(2, 0);
    const BanditInstance inst = make_family_instance(Family::kB, cfg, rng);
    CHECK(inst.misspecified);
    CHECK(inst.theta_min == 1.0);
    for (Index j = 0; j < 2; ++j) CHECK(inst.theta_star[j] == 1.0);
    for (Index j = 2; j < 10; ++j)
      CHECK(std::abs(inst.theta_star[j]) == doctest::Approx(0.025));
  }
}

TEST_CASE("family C entries have the prescribed variance") {
  GeneratorConfig cfg;
  cfg.num_arms = 100;
  cfg.dim = 20;
  cfg.sparsity = 4;
  Rng rng(3, 0);
  const BanditInstance inst = make_family_instance(Family::kC, cfg, rng);

  const Real scale = 0.5;  // 1 / sqrt(4)
  for (Index j = 0; j < 4; ++j)
    CHECK(inst.theta_star[j] == doctest::Approx(scale).epsilon(1e-12));
  Real var = 0;
  for (Index k = 0; k < inst.num_arms(); ++k)
    var += inst.arms.row(k).squaredNorm();
  var /= static_cast<Real>(inst.num_arms() * inst.dim());
  CHECK(var == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("family D entries are bounded cosines with symmetric signs") {
  GeneratorConfig cfg;
  cfg.num_arms = 60;
  cfg.dim = 15;
  cfg.sparsity = 3;
  Rng rng(4, 0);
  const BanditInstance inst = make_family_instance(Family::kD, cfg, rng);

  long positives = 0;
  for (Index k = 0; k < inst.num_arms(); ++k)
    for (Index j = 0; j < inst.dim(); ++j) {
      CHECK(std::abs(inst.arms(k, j)) <= 1.0);
      CHECK(std::abs(inst.arms(k, j)) >= 0.2);
      positives += inst.arms(k, j) > 0 ? 1 : 0;
    }
  const Real frac = static_cast<Real>(positives) / (60.0 * 15.0);
  CHECK(frac > 0.4);
  CHECK(frac < 0.6);
}

TEST_CASE("family E pins the endpoint arms and the off-support radius") {
  GeneratorConfig cfg;
  cfg.num_arms = 20;
  cfg.dim = 10;
  cfg.sparsity = 2;
  Rng rng(5, 0);
  const BanditInstance inst = make_family_instance(Family::kE, cfg, rng);

  CHECK(inst.arms(0, 0) == doctest::Approx(std::cos(3.14159265358979 / 4)));
  CHECK(inst.arms(0, 1) == doctest::Approx(std::sin(3.14159265358979 / 4)));
  CHECK(inst.arms(19, 0) ==
        doctest::Approx(std::cos(5 * 3.14159265358979 / 4)));
  CHECK(inst.arms(19, 1) ==
        doctest::Approx(std::sin(5 * 3.14159265358979 / 4)));

  const Real tail_radius = std::sqrt(8.0 / 2.0);
  for (Index k = 0; k < 20; ++k) {
    CHECK(inst.arms.row(k).head(2).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inst.arms.row(k).tail(8).norm() ==
          doctest::Approx(tail_radius).epsilon(1e-12));
  }
  CHECK(summarize(inst).best_arm == 0);
}

TEST_CASE("family E rejects incompatible shapes") {
  GeneratorConfig cfg;
  cfg.num_arms = 10;
  cfg.dim = 8;
  cfg.sparsity = 3;
  Rng rng(6, 0);
  CHECK_THROWS_AS(make_family_instance(Family::kE, cfg, rng), InvalidArgument);
}

TEST_CASE("family names round-trip and reject unknowns") {
  for (Family f : {Family::kA, Family::kB, Family::kC, Family::kD, Family::kE})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK(family_from_name("a") == Family::kA);
  CHECK_THROWS_AS(family_from_name("Z"), InvalidArgument);
}

TEST_CASE("generation is deterministic in the rng state") {
  GeneratorConfig cfg;
  cfg.num_arms = 25;
  cfg.dim = 8;
  cfg.sparsity = 2;
  Rng r1(9, 4);
  Rng r2(9, 4);
  const BanditInstance a = make_family_instance(Family::kC, cfg, r1);
  const BanditInstance b = make_family_instance(Family::kC, cfg, r2);
  CHECK((a.arms.array() == b.arms.array()).all());
  CHECK((a.theta_star.array() == b.theta_star.array()).all());
}

}  // namespace
}  // namespace sbai

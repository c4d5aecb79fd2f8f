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

#include "sbai/instance.hpp"

#include <doctest.h>

#include "sbai/io.hpp"

using namespace sbai;

namespace {

BanditInstance simple_instance() {
  Matd arms = Matd::Identity(3, 3);
  Vecd theta(3);
  theta << 0.3, 0.0, 0.5;
  return make_instance(arms, theta, 1.0, 2);
}

}  // namespace

TEST_CASE("strict factory enforces the support size") {
  Matd arms = Matd::Identity(3, 3);
  Vecd theta(3);
  theta << 0.3, 0.0, 0.5;
  CHECK_THROWS_AS(make_instance(arms, theta, 1.0, 3), InvalidArgument);
  const BanditInstance inst = make_instance(arms, theta, 1.0, 2);
  CHECK(inst.theta_min == doctest::Approx(0.3));
  CHECK(inst.s == 2);
  CHECK_FALSE(inst.misspecified);
}

TEST_CASE("misspecified factory takes the s-th largest magnitude") {
  Matd arms = Matd::Identity(4, 4);
  Vecd theta(4);
  theta << 1.0, -0.8, 0.01, 0.005;
  const BanditInstance inst = make_misspecified_instance(arms, theta, 1.0, 2);
  CHECK(inst.theta_min == doctest::Approx(0.8));
  CHECK(inst.misspecified);
}

TEST_CASE("summary ranks means and sorts gaps ascending") {
  const InstanceSummary sum = summarize(simple_instance());
  CHECK(sum.best_arm == 2);
  CHECK(sum.means[0] == doctest::Approx(0.3));
  CHECK(sum.sorted_gaps[0] == doctest::Approx(0.2));
  CHECK(sum.sorted_gaps[1] == doctest::Approx(0.5));
}

TEST_CASE("tied best means are rejected") {
  Matd arms = Matd::Identity(2, 2);
  Vecd theta(2);
  theta << 1.0, 1.0;
  CHECK_THROWS_AS(summarize(make_instance(arms, theta, 1.0, 2)),
                  NonUniqueBestArm);
  // All-zero parameter: every mean ties at zero.
  Vecd zero = Vecd::Zero(2);
  CHECK_THROWS_AS(summarize(make_misspecified_instance(arms, zero, 1.0, 1)),
                  NonUniqueBestArm);
}

TEST_CASE("difficulty index maximizes i over squared gaps") {
  InstanceSummary sum;
  sum.means = Vecd::Zero(4);
  sum.best_arm = 0;
  sum.sorted_gaps.resize(3);
  sum.sorted_gaps << 0.5, 0.5, 1.0;
  CHECK(hardness(sum, 4) == doctest::Approx(12.0));
  CHECK(hardness(sum, 2) == doctest::Approx(8.0));
  CHECK(hardness(sum, 3) == doctest::Approx(12.0));
  CHECK_THROWS_AS(hardness(sum, 1), InvalidArgument);
  CHECK_THROWS_AS(hardness(sum, 5), InvalidArgument);

  InstanceSummary unit;
  unit.means = Vecd::Zero(2);
  unit.sorted_gaps.resize(1);
  unit.sorted_gaps << 1.0;
  CHECK(hardness(unit, 2) == doctest::Approx(2.0));
}

TEST_CASE("difficulty is monotone in the prefix length") {
  Rng rng(17, 4);
  Matd arms(12, 5);
  for (Index i = 0; i < 12; ++i) arms.row(i) = rng.normal_vector(5);
  Vecd theta = Vecd::Zero(5);
  theta[0] = 1.0;
  const auto sum = summarize(make_instance(arms, theta, 1.0, 1));
  Real prev = 0;
  for (Index m = 2; m <= 12; ++m) {
    const Real h = hardness(sum, m);
    CHECK(h >= prev);
    prev = h;
  }
}

TEST_CASE("noiseless rewards are exact means, noisy ones average to them") {
  Matd arms(2, 2);
  arms << 1.0, 0.0, 0.3, 0.4;
  Vecd theta(2);
  theta << 0.7, 0.0;
  const BanditInstance clean = make_instance(arms, theta, 0.0, 1);
  Rng rng(1, 2);
  const Vecd y = sample_rewards(clean, {0, 1, 0}, rng);
  CHECK(y[0] == doctest::Approx(0.7));
  CHECK(y[1] == doctest::Approx(0.21));
  CHECK(y[2] == doctest::Approx(0.7));

  const BanditInstance noisy = make_instance(arms, theta, 1.0, 1);
  Rng rng2(1, 3);
  std::vector<Index> pulls(20000, 0);
  const Vecd z = sample_rewards(noisy, pulls, rng2);
  CHECK(z.mean() == doctest::Approx(0.7).epsilon(0.05));
  Rng rng3(1, 3);
  const Vecd z2 = sample_rewards(noisy, pulls, rng3);
  CHECK((z - z2).cwiseAbs().maxCoeff() == 0.0);  // same stream, same draws
}

TEST_CASE("means ignore coordinates off the parameter support") {
  Matd arms(2, 3);
  arms << 1.0, 0.0, 5.0, 0.5, 2.0, -7.0;
  Vecd theta(3);
  theta << 1.0, 0.0, 0.0;
  Matd perturbed = arms;
  perturbed.col(2).setConstant(100.0);
  perturbed.col(1) *= -3.0;
  const auto a = summarize(make_instance(arms, theta, 1.0, 1));
  const auto b = summarize(make_instance(perturbed, theta, 1.0, 1));
  CHECK((a.means - b.means).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("instance json round-trips exactly") {
  Rng rng(21, 9);
  Matd arms(5, 3);
  for (Index i = 0; i < 5; ++i) arms.row(i) = rng.normal_vector(3);
  Vecd theta = Vecd::Zero(3);
  theta[1] = 1.0 / 3.0;
  const BanditInstance inst = make_instance(arms, theta, 0.75, 1);
  const auto j = instance_to_json(inst);
  const BanditInstance back = instance_from_json(j);
  CHECK(back.arms == inst.arms);
  CHECK(back.theta_star == inst.theta_star);
  CHECK(back.noise_sigma == inst.noise_sigma);
  CHECK(back.s == inst.s);
  // A second hop produces byte-identical text.
  CHECK(instance_to_json(back).dump() == j.dump());
}

TEST_CASE("bounded-mean check") {
  Matd arms = Matd::Identity(2, 2);
  Vecd theta(2);
  theta << 0.9, 0.3;
  CHECK(max_abs_mean(make_instance(arms, theta, 1.0, 2)) ==
        doctest::Approx(0.9));
}

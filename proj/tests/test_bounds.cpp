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

#include "sbai/bounds.hpp"

#include <cmath>

#include <doctest.h>

namespace sbai {
namespace {

TEST_CASE("screening failure bound matches a hand-computed value") {
  const BoundValue b = support_recovery_bound(1000, 0.4, 10, 1.0);
  // exponent = 1000 * 0.16 / 32 = 5, prefactor = 2 d = 20.
  CHECK(b.exponent == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(b.prefactor == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(b.value == doctest::Approx(20.0 * std::exp(-5.0)).epsilon(1e-12));
}

TEST_CASE("screening failure bound clips to one and rejects bad inputs") {
  CHECK(support_recovery_bound(1, 1e-3, 50, 10.0).value == 1.0);
  CHECK(support_recovery_bound(10, 0.0, 3, 1.0).value == 1.0);
  CHECK_THROWS_AS(support_recovery_bound(0, 0.1, 3, 1.0), InvalidArgument);
  CHECK_THROWS_AS(support_recovery_bound(10, 0.1, 3, 0.0), InvalidArgument);
  CHECK_THROWS_AS(support_recovery_bound(10, -0.1, 3, 1.0), InvalidArgument);
}

TEST_CASE("screening failure bound decreases in the budget") {
  Real prev = 2;
  for (long t1 : {10, 100, 1000, 10000}) {
    const Real v = support_recovery_bound(t1, 0.2, 8, 2.0).value;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("elimination bound matches a hand-computed value") {
  // d = 2 gives one round, so the round budget is all of T = 320.
  const BoundValue b = elimination_bound(2, 2, 320, 2.0);
  CHECK(b.prefactor == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(b.exponent ==
        doctest::Approx(320.0 / (16.0 * (1.0 + 4.0 / 320.0) * 2.0))
            .epsilon(1e-12));
  CHECK(b.value ==
        doctest::Approx(3.0 * std::exp(-b.exponent)).epsilon(1e-12));
}

TEST_CASE("elimination bound validates its domain") {
  CHECK_THROWS_AS(elimination_bound(1, 4, 100, 1.0), InvalidArgument);
  CHECK_THROWS_AS(elimination_bound(4, 1, 100, 1.0), InvalidArgument);
  CHECK_THROWS_AS(elimination_bound(4, 4, 1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(elimination_bound(4, 4, 100, 0.0), InvalidArgument);
}

TheoryInputs base_inputs() {
  TheoryInputs in;
  in.num_arms = 50;
  in.dim = 10;
  in.sparsity = 2;
  in.budget = 1000;
  in.exploration = 763;
  in.lambda_init = 0.4;
  in.lambda_thres = 0.2;
  in.compat = 4.0;  // b = 1
  in.x2max = 1.0;
  in.theta_min = 1.0;
  in.hardness_full = 12.0;
  in.hardness_screen = 12.0;
  return in;
}

TEST_CASE("two-phase bound composes its screening and elimination terms") {
  const TheoryInputs in = base_inputs();
  const TwoPhaseBound b = two_phase_bound(in);

  // b = 1, c = 1/2: worst-case screened support is floor(2 * 3) = 6.
  CHECK(b.s1 == 6);
  CHECK(b.hypothesis_ok);

  const BoundValue screen =
      support_recovery_bound(in.exploration, in.lambda_init, in.dim, in.x2max);
  CHECK(b.screen_term == doctest::Approx(screen.value).epsilon(1e-12));
  CHECK(b.screen_exponent == doctest::Approx(screen.exponent).epsilon(1e-12));

  const long t2 = in.budget - in.exploration;
  const Real eps = 36.0 / t2;
  const Real expected_elim =
      std::floor(t2 / std::log2(6.0)) / (16.0 * (1.0 + eps) * 12.0);
  CHECK(b.elim_exponent == doctest::Approx(expected_elim).epsilon(1e-12));

  CHECK(b.total.value ==
        doctest::Approx(std::min(Real{1}, b.screen_term + b.elim_term))
            .epsilon(1e-12));
  // The closed-form split over-provisions screening on this configuration.
  CHECK(b.screen_exponent >= b.elim_exponent);
}

TEST_CASE("two-phase bound is vacuous when detectability fails") {
  TheoryInputs in = base_inputs();
  in.theta_min = 0.5;  // below lambda_init (c + b s) = 0.4 * 2.5 = 1
  const TwoPhaseBound b = two_phase_bound(in);
  CHECK_FALSE(b.hypothesis_ok);
  CHECK(b.total.value == 1.0);
}

TEST_CASE("detectability equality passes within the tolerance") {
  TheoryInputs in = base_inputs();
  in.theta_min = in.lambda_init * (0.5 + 1.0 * 2.0);  // exact equality
  CHECK(two_phase_bound(in).hypothesis_ok);
}

TEST_CASE("closed-form hyperparameters match hand values at s = 2") {
  const AnalyticalHyperparameters h =
      analytical_hyperparameters(1.0, 1.0, 2, 1.0, 1000);
  CHECK(h.kappa == doctest::Approx(25.0 / 24.0).epsilon(1e-12));
  // 1 / sqrt(kappa * 6) = 1 / sqrt(6.25).
  CHECK(h.lambda_init == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(h.lambda_thres == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(h.c0 == doctest::Approx(25.0 / (3.0 * std::log2(6.0))).epsilon(1e-12));
  CHECK(h.t1 == 763);
  CHECK(h.t2 == 237);
  CHECK(h.s1 == 6);
  CHECK(h.hypothesis_ok);
}

TEST_CASE("closed-form support cap equals s + s^2 across sparsities") {
  for (Index s = 1; s <= 64; ++s) {
    const AnalyticalHyperparameters h =
        analytical_hyperparameters(2.0, 0.7, s, 3.0, 100000);
    CHECK(h.s1 == s + s * s);
  }
}

TEST_CASE("closed-form detectability margin holds exactly for s >= 2") {
  // The margin ratio is sqrt(24/25) * sqrt(s + s^2) / (1/s + s), which is
  // greater than one for every s >= 2 and below one only at s = 1.
  for (Index s = 2; s <= 64; ++s) {
    const AnalyticalHyperparameters h =
        analytical_hyperparameters(1.7, 0.3, s, 2.0, 50000);
    CHECK(h.hypothesis_ok);
  }
  CHECK_FALSE(analytical_hyperparameters(1.7, 0.3, 1, 2.0, 50000).hypothesis_ok);
}

TEST_CASE("balanced split equates the phase exponents") {
  const Real lambda_init = 0.4, x2max = 1.0, hardness = 12.0;
  const long s1 = 6, T = 2000;
  const long t1 = balanced_phase_split(lambda_init, x2max, s1, hardness, T);
  CHECK(t1 >= 1);
  CHECK(t1 <= T - 1);

  const auto screen_exp = [&](Real a) {
    return a * lambda_init * lambda_init / (32.0 * x2max);
  };
  const auto elim_exp = [&](Real b) {
    return b * b / (16.0 * std::log2(6.0) * hardness * (b + 36.0));
  };
  const Real e1 = screen_exp(static_cast<Real>(t1));
  const Real e2 = elim_exp(static_cast<Real>(T - t1));
  CHECK(std::abs(e1 - e2) / std::max(e1, e2) < 0.05);

  // Local optimality of the worst exponent.
  const auto worst = [&](long a) {
    return std::min(screen_exp(static_cast<Real>(a)),
                    elim_exp(static_cast<Real>(T - a)));
  };
  CHECK(worst(t1) >= worst(t1 - 25));
  CHECK(worst(t1) >= worst(t1 + 25));
}

TEST_CASE("balanced split falls back to extreme splits when one phase wins") {
  // A huge penalty makes screening nearly free, so almost everything goes to
  // elimination.
  const long t1 = balanced_phase_split(100.0, 1e-6, 6, 12.0, 1000);
  CHECK(t1 == 1);
  // A vanishing penalty makes screening hopeless; the split starves
  // elimination instead.
  const long t1b = balanced_phase_split(1e-8, 100.0, 6, 1e-6, 1000);
  CHECK(t1b == 999);
}

TEST_CASE("combined bound tracks the elimination exponent up to floor slack") {
  const Index K = 50, d = 10, s = 2;
  const long T = 100000;
  const AnalyticalHyperparameters h =
      analytical_hyperparameters(1.0, 1.0, s, 1.0, T);
  const BoundValue comb = combined_bound(K, d, s, T, h.c0, 12.0);

  TheoryInputs in = base_inputs();
  in.budget = T;
  in.exploration = h.t1;
  const TwoPhaseBound two = two_phase_bound(in);

  // The single-expression form replaces log2(s + s^2) by its floor inside
  // the exponent; the ratio of the two exponents stays within that slack.
  const Real ratio = comb.exponent / two.elim_exponent;
  CHECK(ratio >= 0.99);
  CHECK(ratio <= std::log2(6.0) / std::floor(std::log2(6.0)) + 0.05);
}

TEST_CASE("combined bound decreases in the budget") {
  const Real a = combined_bound(50, 10, 2, 20000, 3.2, 12.0).value;
  const Real b = combined_bound(50, 10, 2, 40000, 3.2, 12.0).value;
  CHECK(b < a);
  CHECK(a <= 1.0);
  CHECK(b > 0.0);
}

TEST_CASE("robust pipeline bound behaves monotonically") {
  const Real base = robust_two_phase_bound(20, 8, 2, 50000, 8.0, 8.0).value;
  CHECK(base > 0.0);
  CHECK(base <= 1.0);
  CHECK(robust_two_phase_bound(20, 8, 2, 100000, 8.0, 8.0).value <= base);
  CHECK(robust_two_phase_bound(20, 8, 2, 50000, 16.0, 8.0).value >= base);
  CHECK_THROWS_AS(robust_two_phase_bound(20, 8, 1, 50000, 8.0, 8.0),
                  InvalidArgument);
}

}  // namespace
}  // namespace sbai

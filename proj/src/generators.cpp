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

namespace sbai {

namespace {

constexpr Real kPi = 3.14159265358979323846;

Vecd sphere_point(Index d, Real radius, Rng& rng) {
  Vecd v = rng.normal_vector(d);
  Real n = v.norm();
  while (n < 1e-12) {
    v = rng.normal_vector(d);
    n = v.norm();
  }
  return v * (radius / n);
}

BanditInstance make_a(const GeneratorConfig& cfg, Rng& rng) {
  const Real radius =
      std::sqrt(static_cast<Real>(cfg.dim) / static_cast<Real>(cfg.sparsity));
  Matd arms(cfg.num_arms, cfg.dim);
  for (Index k = 0; k < cfg.num_arms; ++k)
    arms.row(k) = sphere_point(cfg.dim, radius, rng).transpose();
  Vecd theta = Vecd::Zero(cfg.dim);
  theta.head(cfg.sparsity).setOnes();
  return make_instance(std::move(arms), std::move(theta), cfg.noise_sigma,
                       cfg.sparsity);
}

BanditInstance make_b(const GeneratorConfig& cfg, Rng& rng) {
  const Real radius =
      std::sqrt(static_cast<Real>(cfg.dim) / static_cast<Real>(cfg.sparsity));
  Matd arms(cfg.num_arms, cfg.dim);
  for (Index k = 0; k < cfg.num_arms; ++k)
    arms.row(k) = sphere_point(cfg.dim, radius, rng).transpose();
  Vecd theta = Vecd::Zero(cfg.dim);
  theta.head(cfg.sparsity).setOnes();
  if (cfg.delta == 0.0)
    return make_instance(std::move(arms), std::move(theta), cfg.noise_sigma,
                         cfg.sparsity);
  for (Index j = cfg.sparsity; j < cfg.dim; ++j)
    theta[j] = cfg.delta * rng.rademacher();
  return make_misspecified_instance(std::move(arms), std::move(theta),
                                    cfg.noise_sigma, cfg.sparsity);
}

BanditInstance make_c(const GeneratorConfig& cfg, Rng& rng) {
  const Real scale = 1.0 / std::sqrt(static_cast<Real>(cfg.sparsity));
  Matd arms(cfg.num_arms, cfg.dim);
  for (Index k = 0; k < cfg.num_arms; ++k)
    arms.row(k) = (scale * rng.normal_vector(cfg.dim)).transpose();
  Vecd theta = Vecd::Zero(cfg.dim);
  theta.head(cfg.sparsity).setConstant(scale);
  return make_instance(std::move(arms), std::move(theta), cfg.noise_sigma,
                       cfg.sparsity);
}

BanditInstance make_d(const GeneratorConfig& cfg, Rng& rng) {
  Matd arms(cfg.num_arms, cfg.dim);
  for (Index k = 0; k < cfg.num_arms; ++k)
    for (Index j = 0; j < cfg.dim; ++j)
      arms(k, j) =
          rng.rademacher() * std::cos(kPi / 4.0 + 0.1 * rng.normal());
  Vecd theta = Vecd::Zero(cfg.dim);
  theta.head(cfg.sparsity)
      .setConstant(1.0 / std::sqrt(static_cast<Real>(cfg.sparsity)));
  return make_instance(std::move(arms), std::move(theta), cfg.noise_sigma,
                       cfg.sparsity);
}

BanditInstance make_e(const GeneratorConfig& cfg, Rng& rng) {
  require(cfg.sparsity == 2, "family E: the informative block is two-wide");
  require(cfg.dim >= 3, "family E: need dimension >= 3");
  require(cfg.num_arms >= 3, "family E: need at least three arms");
  const Index K = cfg.num_arms;
  const Index d = cfg.dim;
  Matd arms(K, d);
  for (Index k = 0; k < K; ++k) {
    Real angle;
    if (k == 0) {
      angle = kPi / 4.0;
    } else if (k == K - 1) {
      angle = 5.0 * kPi / 4.0;
    } else {
      angle = kPi / 2.0 + 0.3 * rng.normal();
    }
    arms(k, 0) = std::cos(angle);
    arms(k, 1) = std::sin(angle);
    const Real radius = std::sqrt(static_cast<Real>(d - 2) / 2.0);
    arms.row(k).tail(d - 2) = sphere_point(d - 2, radius, rng).transpose();
  }
  Vecd theta = Vecd::Zero(d);
  theta.head(2).setConstant(1.0 / std::sqrt(2.0));
  return make_instance(std::move(arms), std::move(theta), cfg.noise_sigma, 2);
}

}  // namespace

Family family_from_name(const std::string& name) {
  if (name == "A" || name == "a") return Family::kA;
  if (name == "B" || name == "b") return Family::kB;
  if (name == "C" || name == "c") return Family::kC;
  if (name == "D" || name == "d") return Family::kD;
  if (name == "E" || name == "e") return Family::kE;
  throw InvalidArgument("unknown family name: " + name);
}

std::string family_name(Family family) {
  switch (family) {
    case Family::kA: return "A";
    case Family::kB: return "B";
    case Family::kC: return "C";
    case Family::kD: return "D";
    case Family::kE: return "E";
  }
  throw InvalidArgument("unknown family value");
}

BanditInstance make_family_instance(Family family, const GeneratorConfig& cfg,
                                    Rng& rng) {
  require(cfg.num_arms >= 2, "generator: need at least two arms");
  require(cfg.sparsity >= 1 && cfg.sparsity <= cfg.dim,
          "generator: sparsity outside [1, d]");
  // Exact mean ties have probability zero but would poison a whole run;
  // redraw a fresh instance if one ever occurs.
  for (int attempt = 0; attempt < 100; ++attempt) {
    BanditInstance inst;
    switch (family) {
      case Family::kA: inst = make_a(cfg, rng); break;
      case Family::kB: inst = make_b(cfg, rng); break;
      case Family::kC: inst = make_c(cfg, rng); break;
      case Family::kD: inst = make_d(cfg, rng); break;
      case Family::kE: inst = make_e(cfg, rng); break;
    }
    try {
      summarize(inst);
      return inst;
    } catch (const NonUniqueBestArm&) {
      continue;
    }
  }
  throw Error("generator: could not draw an instance with a unique best arm");
}

}  // namespace sbai

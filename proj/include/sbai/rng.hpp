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

#ifndef SBAI_RNG_HPP_
#define SBAI_RNG_HPP_

#include <cmath>
#include <cstdint>

#include "sbai/common.hpp"

namespace sbai {

// Counter-based generator (Threefry-4x64, 20 rounds). Streams are keyed, so
// (seed, stream) pairs yield disjoint sequences without coordination; that is
// what makes parallel Monte-Carlo trials reproducible independently of worker
// scheduling.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
      : key_{seed, stream, substream, 0x5ba1c0de2026ull} {}

  // Derived generator with its own disjoint stream. Children of distinct tags
  // never collide with each other or with the parent.
  Rng split(std::uint64_t tag) const {
    Rng child = *this;
    child.key_[2] = mix64(key_[2] ^ mix64(tag + 0x9e3779b97f4a7c15ull));
    child.key_[3] = mix64(key_[3] + tag + 1);
    child.counter_[0] = child.counter_[1] = 0;
    child.buf_pos_ = 4;
    child.have_cached_normal_ = false;
    return child;
  }

  std::uint64_t next_u64() {
    if (buf_pos_ == 4) refill();
    return buf_[buf_pos_++];
  }

  // Uniform on (0, 1]; never 0 so log() is safe.
  Real uniform() {
    return static_cast<Real>((next_u64() >> 11) + 1) * 0x1p-53;
  }

  // Standard normal via Box-Muller; consumes uniforms in fixed pairs.
  Real normal() {
    if (have_cached_normal_) {
      have_cached_normal_ = false;
      return cached_normal_;
    }
    const Real u1 = uniform();
    const Real u2 = uniform();
    const Real r = std::sqrt(-2.0 * std::log(u1));
    const Real t = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(t);
    have_cached_normal_ = true;
    return r * std::cos(t);
  }

  Vecd normal_vector(Index n) {
    Vecd v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  // Index sampled from the distribution given by nonnegative weights summing
  // to ~1. Inverse-CDF walk; ties broken toward lower indices.
  Index discrete(const Vecd& weights) {
    const Real u = uniform() * weights.sum();
    Real acc = 0;
    for (Index i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (u <= acc) return i;
    }
    return weights.size() - 1;
  }

  Real rademacher() { return (next_u64() & 1) ? 1.0 : -1.0; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int r) {
    return (x << r) | (x >> (64 - r));
  }

  // splitmix64 finalizer; used only for key derivation.
  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  void refill() {
    static constexpr int kRot[8][2] = {{14, 16}, {52, 57}, {23, 40}, {5, 37},
                                       {25, 33}, {46, 12}, {58, 22}, {32, 32}};
    const std::uint64_t ks4 = 0x1bd11bdaa9fc1a22ull ^ key_[0] ^ key_[1] ^
                              key_[2] ^ key_[3];
    const std::uint64_t ks[5] = {key_[0], key_[1], key_[2], key_[3], ks4};
    std::uint64_t x0 = counter_[0] + ks[0];
    std::uint64_t x1 = counter_[1] + ks[1];
    std::uint64_t x2 = ks[2];
    std::uint64_t x3 = ks[3];
    for (int d = 0; d < 20; ++d) {
      if ((d & 1) == 0) {
        x0 += x1; x1 = rotl(x1, kRot[d & 7][0]); x1 ^= x0;
        x2 += x3; x3 = rotl(x3, kRot[d & 7][1]); x3 ^= x2;
      } else {
        x0 += x3; x3 = rotl(x3, kRot[d & 7][0]); x3 ^= x0;
        x2 += x1; x1 = rotl(x1, kRot[d & 7][1]); x1 ^= x2;
      }
      if ((d & 3) == 3) {
        const int q = d / 4 + 1;
        x0 += ks[q % 5];
        x1 += ks[(q + 1) % 5];
        x2 += ks[(q + 2) % 5];
        x3 += ks[(q + 3) % 5] + static_cast<std::uint64_t>(q);
      }
    }
    buf_[0] = x0; buf_[1] = x1; buf_[2] = x2; buf_[3] = x3;
    buf_pos_ = 0;
    if (++counter_[0] == 0) ++counter_[1];
  }

  std::uint64_t key_[4];
  std::uint64_t counter_[2] = {0, 0};
  std::uint64_t buf_[4] = {0, 0, 0, 0};
  int buf_pos_ = 4;
  Real cached_normal_ = 0;
  bool have_cached_normal_ = false;
};

}  // namespace sbai

#endif  // SBAI_RNG_HPP_

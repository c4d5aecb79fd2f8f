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

#ifndef SBAI_BENCH_HPP_
#define SBAI_BENCH_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbai/allocation.hpp"
#include "sbai/bounds.hpp"
#include "sbai/generators.hpp"
#include "sbai/instance.hpp"

namespace sbai {

// How the two-phase algorithms pick their penalties and budget split:
//  explicit    taken verbatim from the config
//  analytical  closed-form penalties from the exploration-design geometry,
//              with the split balancing the two phase exponents
//  cv          penalties by cross-validation on the exploration data, with
//              t1 = T / 5
enum class HyperMode { kExplicit, kAnalytical, kCv };

HyperMode hyper_mode_from_name(const std::string& name);
std::string hyper_mode_name(HyperMode mode);

struct ExperimentConfig {
  std::string family = "A";
  Index num_arms = 50;
  Index dim = 10;
  Index sparsity = 2;
  long budget = 800;
  int trials = 1000;
  Real noise_sigma = 1.0;
  Real delta = 0.0;
  uint64_t seed = 1;
  bool fixed_instance = false;
  std::vector<std::string> algos = {"lasso-od"};
  HyperMode hyper_mode = HyperMode::kAnalytical;
  long t1 = 0;             // explicit mode
  Real lambda_init = 0;    // explicit mode
  Real lambda_thres = 0;   // explicit mode
};

struct BenchRow {
  std::string family;
  std::string algo;
  Index dim = 0;
  Index num_arms = 0;
  Index sparsity = 0;
  long budget = 0;
  int trials = 0;
  long errors = 0;
  Real p_hat = 0;
  Real std_err = 0;
  Real mean_support = 0;
  double seconds = 0;
};

// Closed-form penalties and a balanced budget split computed from one
// instance's exploration-design geometry (used per trial in analytical mode).
struct InstanceHyperparameters {
  Real lambda_init = 0;
  Real lambda_thres = 0;
  long t1 = 0;
  Real compat = 0;
  Real x2max = 0;
  bool compat_exact = true;
};

InstanceHyperparameters analytical_for_instance(const BanditInstance& inst,
                                                long T);

// Same, reusing an already-solved exploration design for the instance.
InstanceHyperparameters analytical_for_instance(const BanditInstance& inst,
                                                long T,
                                                const Allocation& design);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Monte-Carlo estimate of the error probability of each configured algorithm.
// Trials are independent across the trial index, not across workers, so any
// worker count produces identical statistics.
std::vector<BenchRow> run_benchmark(const ExperimentConfig& cfg, int workers);

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows);

// Number of worker threads: SBAI_WORKERS when set, hardware concurrency
// otherwise, at least one either way.
int worker_count_from_env();

struct SupportRecoveryResult {
  int trials = 0;
  int misses = 0;  // trials where the kept support lost a true coordinate
  Real miss_rate = 0;
  Real mean_support = 0;
};

// Pure estimation experiment: rows i.i.d. N(0, 1/s), theta = 1 on [s], unit
// noise; penalties recomputed per trial from the empirical Gram matrix.
SupportRecoveryResult support_recovery_experiment(Index dim, Index sparsity,
                                                  long samples, int trials,
                                                  uint64_t seed, int workers);

}  // namespace sbai

#endif  // SBAI_BENCH_HPP_

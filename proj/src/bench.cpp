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

#include "sbai/bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "sbai/algorithms.hpp"
#include "sbai/compatibility.hpp"
#include "sbai/cv.hpp"

namespace sbai {

namespace {

// Runs fn(t) for t in [0, count) across the workers; the first exception
// wins and is rethrown on the calling thread.
void parallel_trials(int count, int workers,
                     const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int t = 0; t < count; ++t) fn(t);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto body = [&] {
    for (int t = next.fetch_add(1); t < count; t = next.fetch_add(1)) {
      try {
        fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct TrialResult {
  bool error = false;
  bool has_support = false;
  Index support_size = 0;
};

struct AlgoSpec {
  std::string name;
  int index = 0;
};

GeneratorConfig generator_config(const ExperimentConfig& cfg) {
  GeneratorConfig g;
  g.num_arms = cfg.num_arms;
  g.dim = cfg.dim;
  g.sparsity = cfg.sparsity;
  g.noise_sigma = cfg.noise_sigma;
  g.delta = cfg.delta;
  return g;
}

// Exploration design, budget split, and penalties for one two-phase trial;
// shared across trials when the instance itself is shared.
struct LassoPlan {
  Allocation design;
  Veci counts;
  long t1 = 0;
  Real lambda_init = 0;
  Real lambda_thres = 0;
};

// Monte-Carlo runs tolerate a loose design certificate; the weights are
// essentially settled long before the dual gap closes.
constexpr Real kHarnessDesignTol = 1e-4;
constexpr long kHarnessDesignIters = 4000;

LassoPlan make_lasso_plan(const ExperimentConfig& cfg,
                          const BanditInstance& inst) {
  LassoPlan plan;
  plan.design =
      e_optimal_design(inst.arms, kHarnessDesignTol, kHarnessDesignIters);
  switch (cfg.hyper_mode) {
    case HyperMode::kExplicit:
      plan.t1 = cfg.t1;
      plan.lambda_init = cfg.lambda_init;
      plan.lambda_thres = cfg.lambda_thres;
      break;
    case HyperMode::kAnalytical: {
      const InstanceHyperparameters h =
          analytical_for_instance(inst, cfg.budget, plan.design);
      plan.t1 = h.t1;
      plan.lambda_init = h.lambda_init;
      plan.lambda_thres = h.lambda_thres;
      break;
    }
    case HyperMode::kCv:
      plan.t1 = std::max<long>(cfg.budget / 5, 1);
      break;
  }
  plan.counts = round_allocation(plan.design.weights, plan.t1);
  return plan;
}

TrialResult run_one_trial(const ExperimentConfig& cfg, const AlgoSpec& algo,
                          const BanditInstance& inst,
                          const LassoPlan* cached_plan, Rng& rng_algo,
                          Rng& rng_cv) {
  const Index best = summarize(inst).best_arm;
  AlgorithmOutcome out;
  if (algo.name == "odlinbai") {
    out = od_linbai(inst, cfg.budget, rng_algo);
  } else if (algo.name == "odlinbai-xy") {
    out = od_linbai(inst, cfg.budget, rng_algo, AllocationRule::kDifferences);
  } else if (algo.name == "gse") {
    out = gse(inst, cfg.budget, rng_algo);
  } else if (algo.name == "popart-od") {
    out = popart_od(inst, cfg.budget, inst.theta_min, inst.s, rng_algo);
  } else if (algo.name == "lasso-od" || algo.name == "lasso-xy") {
    LassoPlan local;
    if (cached_plan == nullptr) {
      local = make_lasso_plan(cfg, inst);
      cached_plan = &local;
    }
    TwoPhaseConfig tp;
    tp.rule = algo.name == "lasso-od" ? AllocationRule::kWorstCase
                                      : AllocationRule::kDifferences;
    tp.t1 = cached_plan->t1;
    tp.lambda_init = cached_plan->lambda_init;
    tp.lambda_thres = cached_plan->lambda_thres;

    PhaseOneData p1;
    p1.counts = cached_plan->counts;
    std::vector<Index> pull_list;
    pull_list.reserve(static_cast<size_t>(tp.t1));
    for (Index k = 0; k < inst.num_arms(); ++k)
      for (int c = 0; c < p1.counts[k]; ++c) pull_list.push_back(k);
    p1.rewards = sample_rewards(inst, pull_list, rng_algo);

    if (cfg.hyper_mode == HyperMode::kCv) {
      const RegressionProblem data = phase_one_problem(inst, p1);
      CvOptions opt;
      opt.folds = std::min<Index>(5, data.X.rows());
      const CvChoice choice = cv_tune(data, inst.s, opt, rng_cv);
      tp.lambda_init = choice.lambda_init;
      tp.lambda_thres = choice.lambda_thres;
    }
    out = lasso_od(inst, cfg.budget, tp, rng_algo, &p1);
  } else {
    throw InvalidArgument("unknown algorithm name: " + algo.name);
  }

  TrialResult res;
  res.error = out.chosen_arm != best;
  if (out.support_found.has_value()) {
    res.has_support = true;
    res.support_size = static_cast<Index>(out.support_found->size());
  }
  return res;
}

}  // namespace

HyperMode hyper_mode_from_name(const std::string& name) {
  if (name == "explicit") return HyperMode::kExplicit;
  if (name == "analytical") return HyperMode::kAnalytical;
  if (name == "cv") return HyperMode::kCv;
  throw InvalidArgument("unknown hyperparameter mode: " + name);
}

std::string hyper_mode_name(HyperMode mode) {
  switch (mode) {
    case HyperMode::kExplicit: return "explicit";
    case HyperMode::kAnalytical: return "analytical";
    case HyperMode::kCv: return "cv";
  }
  throw InvalidArgument("unknown hyperparameter mode value");
}

InstanceHyperparameters analytical_for_instance(const BanditInstance& inst,
                                                long T) {
  return analytical_for_instance(
      inst, T,
      e_optimal_design(inst.arms, kHarnessDesignTol, kHarnessDesignIters));
}

InstanceHyperparameters analytical_for_instance(const BanditInstance& inst,
                                                long T,
                                                const Allocation& design) {
  const Matd m = gram(design.weights, inst.arms);
  const CompatibilityResult compat = compatibility_constant_s(m, inst.s);
  require(compat.value > 1e-12,
          "analytical_for_instance: exploration design is incompatible");
  const Real b = 4.0 / compat.value;
  const Real x2max = m.diagonal().maxCoeff();

  const AnalyticalHyperparameters h =
      analytical_hyperparameters(b, inst.theta_min, inst.s, x2max, T);
  const InstanceSummary sum = summarize(inst);
  const Index m_top =
      std::clamp<Index>(static_cast<Index>(h.s1), 2, inst.num_arms());
  const Real hard = hardness(sum, m_top);

  InstanceHyperparameters out;
  out.lambda_init = h.lambda_init;
  out.lambda_thres = h.lambda_thres;
  out.t1 = balanced_phase_split(h.lambda_init, x2max, h.s1, hard, T);
  out.compat = compat.value;
  out.x2max = x2max;
  out.compat_exact = compat.exact;
  return out;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  const auto geti = [&](const char* a, const char* b, Index dflt) {
    if (j.contains(a)) return j.at(a).get<Index>();
    if (b != nullptr && j.contains(b)) return j.at(b).get<Index>();
    return dflt;
  };
  cfg.family = j.value("family", cfg.family);
  cfg.num_arms = geti("K", "num_arms", cfg.num_arms);
  cfg.dim = geti("d", "dim", cfg.dim);
  cfg.sparsity = geti("s", "sparsity", cfg.sparsity);
  cfg.budget = j.contains("T") ? j.at("T").get<long>()
                               : j.value("budget", cfg.budget);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.noise_sigma = j.contains("sigma") ? j.at("sigma").get<Real>()
                                        : j.value("noise_sigma", cfg.noise_sigma);
  cfg.delta = j.value("delta", cfg.delta);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.fixed_instance = j.value("fixed_instance", cfg.fixed_instance);
  if (j.contains("algos")) cfg.algos = j.at("algos").get<std::vector<std::string>>();
  cfg.hyper_mode =
      hyper_mode_from_name(j.value("hyper_mode", hyper_mode_name(cfg.hyper_mode)));
  cfg.t1 = j.contains("T1") ? j.at("T1").get<long>() : j.value("t1", cfg.t1);
  cfg.lambda_init = j.value("lambda_init", cfg.lambda_init);
  cfg.lambda_thres = j.value("lambda_thres", cfg.lambda_thres);
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["family"] = cfg.family;
  j["K"] = cfg.num_arms;
  j["d"] = cfg.dim;
  j["s"] = cfg.sparsity;
  j["T"] = cfg.budget;
  j["trials"] = cfg.trials;
  j["sigma"] = cfg.noise_sigma;
  j["delta"] = cfg.delta;
  j["seed"] = cfg.seed;
  j["fixed_instance"] = cfg.fixed_instance;
  j["algos"] = cfg.algos;
  j["hyper_mode"] = hyper_mode_name(cfg.hyper_mode);
  if (cfg.hyper_mode == HyperMode::kExplicit) {
    j["T1"] = cfg.t1;
    j["lambda_init"] = cfg.lambda_init;
    j["lambda_thres"] = cfg.lambda_thres;
  }
  return j;
}

std::vector<BenchRow> run_benchmark(const ExperimentConfig& cfg, int workers) {
  require(cfg.trials >= 1, "run_benchmark: need at least one trial");
  require(!cfg.algos.empty(), "run_benchmark: no algorithms configured");
  const Family family = family_from_name(cfg.family);
  const GeneratorConfig gen = generator_config(cfg);

  BanditInstance shared;
  LassoPlan shared_plan;
  bool have_shared_plan = false;
  const bool lasso_configured =
      std::any_of(cfg.algos.begin(), cfg.algos.end(), [](const std::string& a) {
        return a == "lasso-od" || a == "lasso-xy";
      });
  if (cfg.fixed_instance) {
    Rng rng_fixed = Rng(cfg.seed, 0).split(1);
    shared = make_family_instance(family, gen, rng_fixed);
    if (lasso_configured) {
      shared_plan = make_lasso_plan(cfg, shared);
      have_shared_plan = true;
    }
  }

  std::vector<BenchRow> rows;
  int algo_index = 0;
  for (const std::string& name : cfg.algos) {
    const AlgoSpec spec{name, algo_index++};
    std::vector<TrialResult> slots(static_cast<size_t>(cfg.trials));
    const auto t_start = std::chrono::steady_clock::now();

    parallel_trials(cfg.trials, workers, [&](int t) {
      Rng base(cfg.seed, static_cast<uint64_t>(t) + 1);
      Rng rng_algo = base.split(100 + static_cast<uint64_t>(spec.index));
      Rng rng_cv = base.split(200 + static_cast<uint64_t>(spec.index));
      if (cfg.fixed_instance) {
        slots[static_cast<size_t>(t)] =
            run_one_trial(cfg, spec, shared,
                          have_shared_plan ? &shared_plan : nullptr, rng_algo,
                          rng_cv);
      } else {
        Rng rng_inst = base.split(1);
        const BanditInstance inst = make_family_instance(family, gen, rng_inst);
        slots[static_cast<size_t>(t)] =
            run_one_trial(cfg, spec, inst, nullptr, rng_algo, rng_cv);
      }
    });

    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - t_start;
    BenchRow row;
    row.family = cfg.family;
    row.algo = name;
    row.dim = cfg.dim;
    row.num_arms = cfg.num_arms;
    row.sparsity = cfg.sparsity;
    row.budget = cfg.budget;
    row.trials = cfg.trials;
    long support_total = 0;
    int support_rows = 0;
    for (const TrialResult& r : slots) {
      row.errors += r.error ? 1 : 0;
      if (r.has_support) {
        support_total += r.support_size;
        ++support_rows;
      }
    }
    row.p_hat = static_cast<Real>(row.errors) / cfg.trials;
    row.std_err = std::sqrt(row.p_hat * (1.0 - row.p_hat) / cfg.trials);
    row.mean_support =
        support_rows > 0 ? static_cast<Real>(support_total) / support_rows : 0;
    row.seconds = elapsed.count();
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "family,algo,d,K,s,T,trials,errors,p_hat,stderr,mean_support,seconds\n";
  char buf[160];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.4f,%.3f", r.p_hat, r.std_err,
                  r.mean_support, r.seconds);
    os << r.family << ',' << r.algo << ',' << r.dim << ',' << r.num_arms << ','
       << r.sparsity << ',' << r.budget << ',' << r.trials << ',' << r.errors
       << ',' << buf << '\n';
  }
}

int worker_count_from_env() {
  if (const char* env = std::getenv("SBAI_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return std::min(n, 256);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SupportRecoveryResult support_recovery_experiment(Index dim, Index sparsity,
                                                  long samples, int trials,
                                                  uint64_t seed, int workers) {
  require(dim >= 2 && sparsity >= 1 && sparsity <= dim,
          "support_recovery_experiment: bad shape");
  require(samples >= dim, "support_recovery_experiment: too few samples");
  require(trials >= 1, "support_recovery_experiment: need trials");

  std::vector<char> missed(static_cast<size_t>(trials), 0);
  std::vector<Index> sizes(static_cast<size_t>(trials), 0);
  const Real scale = 1.0 / std::sqrt(static_cast<Real>(sparsity));

  parallel_trials(trials, workers, [&](int t) {
    Rng rng = Rng(seed, static_cast<uint64_t>(t) + 1).split(7);
    RegressionProblem p;
    p.X.resize(samples, dim);
    for (Index i = 0; i < samples; ++i)
      p.X.row(i) = (scale * rng.normal_vector(dim)).transpose();
    Vecd theta = Vecd::Zero(dim);
    theta.head(sparsity).setOnes();
    p.y = p.X * theta + rng.normal_vector(samples);

    const Matd g = p.X.transpose() * p.X / static_cast<Real>(samples);
    const CompatibilityResult compat = compatibility_constant_s(g, sparsity);
    require(compat.value > 1e-12,
            "support_recovery_experiment: degenerate empirical design");
    const Real b = 4.0 / compat.value;
    const Real x2max = g.diagonal().maxCoeff();
    const AnalyticalHyperparameters h = analytical_hyperparameters(
        b, 1.0, sparsity, x2max, std::max<long>(samples, 2));

    const LassoResult fit = lasso(p, h.lambda_init);
    const SparseEstimate est =
        threshold(fit.theta, h.lambda_thres, h.lambda_init);
    bool miss = false;
    for (Index j = 0; j < sparsity; ++j) {
      if (std::find(est.support.begin(), est.support.end(), j) ==
          est.support.end()) {
        miss = true;
        break;
      }
    }
    missed[static_cast<size_t>(t)] = miss ? 1 : 0;
    sizes[static_cast<size_t>(t)] = static_cast<Index>(est.support.size());
  });

  SupportRecoveryResult out;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    out.misses += missed[static_cast<size_t>(t)];
    out.mean_support += static_cast<Real>(sizes[static_cast<size_t>(t)]);
  }
  out.miss_rate = static_cast<Real>(out.misses) / trials;
  out.mean_support /= trials;
  return out;
}

}  // namespace sbai

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

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbai/algorithms.hpp"
#include "sbai/bench.hpp"
#include "sbai/bounds.hpp"
#include "sbai/io.hpp"

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sbai::Error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

sbai::Matd arms_from_json(const json& j) {
  if (j.is_object() && j.contains("arms"))
    return sbai::matrix_from_json(j.at("arms"));
  return sbai::matrix_from_json(j);
}

json allocation_to_json(const sbai::Allocation& a) {
  json out;
  out["weights"] = sbai::vector_to_json(a.weights);
  out["objective"] = a.objective_value;
  out["certificate_gap"] = a.certificate_gap;
  out["converged"] = a.converged;
  out["degenerate"] = a.degenerate;
  return out;
}

json bound_to_json(const sbai::BoundValue& b) {
  json out;
  out["value"] = b.value;
  out["exponent"] = b.exponent;
  out["prefactor"] = b.prefactor;
  return out;
}

json outcome_to_json(const sbai::AlgorithmOutcome& out) {
  json j;
  j["chosen_arm"] = out.chosen_arm;
  j["phase1_budget"] = out.phase1_budget;
  j["phase2_budget"] = out.phase2_budget;
  if (out.support_found.has_value()) {
    j["support_found"] = *out.support_found;
    j["used_support"] = out.used_support;
  }
  json rounds = json::array();
  for (const sbai::RoundRecord& r : out.rounds) {
    json jr;
    jr["active_arms"] = r.active_arms;
    jr["dim"] = r.dim;
    std::vector<int> pulls(r.pulls.data(), r.pulls.data() + r.pulls.size());
    jr["pulls"] = pulls;
    jr["budget"] = r.budget;
    rounds.push_back(std::move(jr));
  }
  j["rounds"] = std::move(rounds);
  return j;
}

int cmd_design(const std::string& arms_path, const std::string& kind,
               double tol, long iters) {
  const sbai::Matd arms = arms_from_json(load_json(arms_path));
  sbai::Allocation a;
  if (kind == "e") {
    a = sbai::e_optimal_design(arms, tol, iters);
  } else if (kind == "g") {
    a = sbai::g_optimal_design(arms, tol, iters);
  } else if (kind == "xy") {
    a = sbai::xy_allocation(arms, tol, iters);
  } else {
    throw sbai::InvalidArgument("unknown design kind: " + kind);
  }
  std::cout << allocation_to_json(a).dump(2) << "\n";
  return 0;
}

int cmd_estimate(const std::string& data_path) {
  const json j = load_json(data_path);
  sbai::RegressionProblem p;
  p.X = sbai::matrix_from_json(j.at("X"));
  p.y = sbai::vector_from_json(j.at("y"));
  const double lambda_init = j.at("lambda_init").get<double>();
  const double lambda_thres = j.at("lambda_thres").get<double>();

  const sbai::LassoResult fit = sbai::lasso(p, lambda_init);
  const sbai::SparseEstimate est =
      sbai::threshold(fit.theta, lambda_thres, lambda_init);
  json out;
  out["theta"] = sbai::vector_to_json(est.coefficients);
  out["support"] = est.support;
  out["kkt_residual"] = fit.kkt_residual;
  out["converged"] = fit.converged;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_run(const std::string& instance_path, const std::string& algo, long T,
            long t1, double lambda_init, double lambda_thres, uint64_t seed,
            bool analytical) {
  const sbai::BanditInstance inst = sbai::load_instance(instance_path);
  sbai::Rng rng(seed, 0);
  sbai::AlgorithmOutcome out;
  if (algo == "odlinbai") {
    out = sbai::od_linbai(inst, T, rng);
  } else if (algo == "odlinbai-xy") {
    out = sbai::od_linbai(inst, T, rng, sbai::AllocationRule::kDifferences);
  } else if (algo == "gse") {
    out = sbai::gse(inst, T, rng);
  } else if (algo == "popart-od") {
    out = sbai::popart_od(inst, T, inst.theta_min, inst.s, rng);
  } else if (algo == "lasso-od" || algo == "lasso-xy") {
    sbai::TwoPhaseConfig cfg;
    cfg.rule = algo == "lasso-od" ? sbai::AllocationRule::kWorstCase
                                  : sbai::AllocationRule::kDifferences;
    if (analytical) {
      const sbai::InstanceHyperparameters h =
          sbai::analytical_for_instance(inst, T);
      cfg.t1 = h.t1;
      cfg.lambda_init = h.lambda_init;
      cfg.lambda_thres = h.lambda_thres;
    } else {
      cfg.t1 = t1;
      cfg.lambda_init = lambda_init;
      cfg.lambda_thres = lambda_thres;
    }
    out = sbai::lasso_od(inst, T, cfg, rng);
  } else {
    throw sbai::InvalidArgument("unknown algorithm name: " + algo);
  }
  std::cout << outcome_to_json(out).dump(2) << "\n";
  return 0;
}

int cmd_bounds(const std::string& inputs_path) {
  const json j = load_json(inputs_path);
  sbai::TheoryInputs in;
  in.num_arms = j.at("K").get<sbai::Index>();
  in.dim = j.at("d").get<sbai::Index>();
  in.sparsity = j.at("s").get<sbai::Index>();
  in.budget = j.at("T").get<long>();
  in.exploration = j.at("T1").get<long>();
  in.lambda_init = j.at("lambda_init").get<double>();
  in.lambda_thres = j.at("lambda_thres").get<double>();
  in.compat = j.at("compat").get<double>();
  in.x2max = j.at("x2max").get<double>();
  in.theta_min = j.at("theta_min").get<double>();
  in.hardness_full = j.at("hardness_full").get<double>();
  in.hardness_screen = j.at("hardness_screen").get<double>();

  json out;
  out["support_recovery"] = bound_to_json(sbai::support_recovery_bound(
      in.exploration, in.lambda_init, in.dim, in.x2max));
  out["single_phase"] = bound_to_json(sbai::elimination_bound(
      in.num_arms, in.dim, in.budget, in.hardness_full));

  const sbai::TwoPhaseBound two = sbai::two_phase_bound(in);
  json jt = bound_to_json(two.total);
  jt["screen_term"] = two.screen_term;
  jt["elim_term"] = two.elim_term;
  jt["screen_exponent"] = two.screen_exponent;
  jt["elim_exponent"] = two.elim_exponent;
  jt["s1"] = two.s1;
  jt["hypothesis_ok"] = two.hypothesis_ok;
  out["two_phase"] = std::move(jt);

  const double b = 4.0 / in.compat;
  const sbai::AnalyticalHyperparameters h = sbai::analytical_hyperparameters(
      b, in.theta_min, in.sparsity, in.x2max, in.budget);
  out["combined"] = bound_to_json(sbai::combined_bound(
      in.num_arms, in.dim, in.sparsity, in.budget, h.c0, in.hardness_screen));
  out["combined"]["c0"] = h.c0;
  out["combined"]["hypothesis_ok"] = h.hypothesis_ok;

  if (j.contains("c_pa") && in.sparsity >= 2 && j.contains("hardness_s")) {
    out["robust_two_phase"] = bound_to_json(sbai::robust_two_phase_bound(
        in.num_arms, in.dim, in.sparsity, in.budget,
        j.at("c_pa").get<double>(), j.at("hardness_s").get<double>()));
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_path) {
  const sbai::ExperimentConfig cfg =
      sbai::config_from_json(load_json(config_path));
  const int workers = sbai::worker_count_from_env();
  const std::vector<sbai::BenchRow> rows = sbai::run_benchmark(cfg, workers);
  std::ofstream out(out_path);
  if (!out) throw sbai::Error("cannot write " + out_path);
  sbai::write_csv(out, rows);
  for (const sbai::BenchRow& r : rows) {
    std::cout << r.family << "/" << r.algo << ": " << r.errors << "/"
              << r.trials << " errors (p_hat " << r.p_hat << ", stderr "
              << r.std_err << ") in " << r.seconds << "s\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for fixed-budget best-arm identification in sparse "
               "linear bandits"};
  app.require_subcommand(1);

  std::string arms_path, kind = "g";
  double tol = 1e-6;
  long iters = 100000;
  CLI::App* design = app.add_subcommand(
      "design", "Solve an allocation design for an arm matrix");
  design->add_option("--arms", arms_path, "JSON file with the arm matrix")
      ->required();
  design->add_option("--kind", kind, "Design kind: e, g, or xy");
  design->add_option("--tol", tol, "Certificate tolerance");
  design->add_option("--iters", iters, "Iteration cap");

  std::string data_path;
  CLI::App* estimate = app.add_subcommand(
      "estimate", "Thresholded lasso on a regression data file");
  estimate->add_option("--data", data_path, "JSON file with X, y, penalties")
      ->required();

  std::string instance_path, algo = "lasso-od";
  long T = 1000, t1 = 0;
  double lambda_init = 0, lambda_thres = 0;
  uint64_t seed = 1;
  bool analytical = false;
  CLI::App* run = app.add_subcommand("run", "Run one algorithm on an instance");
  run->add_option("--instance", instance_path, "Instance JSON file")
      ->required();
  run->add_option("--algo", algo,
                  "odlinbai, odlinbai-xy, gse, lasso-od, lasso-xy, popart-od");
  run->add_option("--T", T, "Total sampling budget");
  run->add_option("--T1", t1, "Exploration budget (two-phase algorithms)");
  run->add_option("--lambda-init", lambda_init, "Lasso penalty");
  run->add_option("--lambda-thres", lambda_thres, "Support threshold");
  run->add_option("--seed", seed, "Random seed");
  run->add_flag("--analytical", analytical,
                "Derive penalties and the split from the instance");

  std::string inputs_path;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "Evaluate error-probability bounds from a parameter file");
  bounds->add_option("--inputs", inputs_path, "JSON file of bound inputs")
      ->required();

  std::string config_path, out_path = "bench.csv";
  CLI::App* bench = app.add_subcommand(
      "bench", "Monte-Carlo benchmark over a configured experiment");
  bench->add_option("--config", config_path, "Experiment config JSON file")
      ->required();
  bench->add_option("--out", out_path, "Output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed()) return cmd_design(arms_path, kind, tol, iters);
    if (estimate->parsed()) return cmd_estimate(data_path);
    if (run->parsed())
      return cmd_run(instance_path, algo, T, t1, lambda_init, lambda_thres,
                     seed, analytical);
    if (bounds->parsed()) return cmd_bounds(inputs_path);
    if (bench->parsed()) return cmd_bench(config_path, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

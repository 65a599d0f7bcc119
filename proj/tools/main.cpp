// Copyright 2026 The diffsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end: simulate trajectories, generate datasets, fit
// physical parameters, evaluate fits, and run planning tasks. All outputs are
// plot-ready JSON/CSV files; identical (config, seed) pairs produce identical
// bytes.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diffsim/diffsim.hpp"

namespace {

using namespace diffsim;
namespace fs = std::filesystem;

constexpr int kExitConfig = 2;
constexpr int kExitSimulation = 3;
constexpr int kExitMissingInput = 4;

struct RunConfig {
  std::string preset;
  std::string presets_dir = DIFFSIM_PRESET_DIR;
  std::string out_dir = "out";
  std::string data_path;
  std::string report_path;
  std::string task = "billiards";
  std::string variant = "cm";
  std::string mode = "lagrangian";
  std::uint64_t seed = 0;
  double dt = 0.0;  // 0 = preset default
  int steps = 100;
  int n_traj = 200;
  int t_chunk = 5;
  int epochs = 3000;
  double lr = 1e-3;
  double epsilon = 0.01;
  double noise_sigma = 0.0;
  int k_steps = 0;
  double solver_tol = 1e-10;
  int solver_max_iter = 50000;
  int threads = 1;
  int iters = 200;
  double plan_lr = 1e-2;
  bool use_truth = false;
  bool verbose = false;
};

void apply_config_file(RunConfig& cfg, const std::string& path) {
  const json_io::json doc = json_io::read_file(path);
  auto get = [&doc](const char* key, auto& field) {
    if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("preset", cfg.preset);
  get("presets_dir", cfg.presets_dir);
  get("out", cfg.out_dir);
  get("data", cfg.data_path);
  get("report", cfg.report_path);
  get("task", cfg.task);
  get("variant", cfg.variant);
  get("mode", cfg.mode);
  get("seed", cfg.seed);
  get("dt", cfg.dt);
  get("steps", cfg.steps);
  get("n_traj", cfg.n_traj);
  get("t_chunk", cfg.t_chunk);
  get("epochs", cfg.epochs);
  get("lr", cfg.lr);
  get("epsilon", cfg.epsilon);
  get("noise_sigma", cfg.noise_sigma);
  get("k_steps", cfg.k_steps);
  get("solver_tol", cfg.solver_tol);
  get("solver_max_iter", cfg.solver_max_iter);
  get("threads", cfg.threads);
  get("iters", cfg.iters);
  get("plan_lr", cfg.plan_lr);
}

sim::SimOptions sim_options(const RunConfig& cfg, const systems::Preset& preset) {
  sim::SimOptions opts;
  opts.dt = cfg.dt > 0.0 ? cfg.dt : preset.spec.dt;
  opts.n_steps = cfg.steps;
  opts.mode = cfg.mode == "hamiltonian" ? dynamics::DynamicsMode::kHamiltonian
                                        : dynamics::DynamicsMode::kLagrangian;
  opts.epsilon = cfg.variant == "cmr" ? cfg.epsilon : 0.0;
  opts.k_steps = cfg.k_steps;
  opts.solver_tol = cfg.solver_tol;
  opts.solver_max_iter = cfg.solver_max_iter;
  return opts;
}

std::string format_row(const std::vector<double>& values) {
  std::string row;
  char buf[64];
  for (size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    if (i) row += ",";
    row += buf;
  }
  return row;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::string text = header + "\n";
  for (const auto& row : rows) text += format_row(row) + "\n";
  json_io::write_file(path, text);
}

systems::Preset load_preset_or_exit(const RunConfig& cfg) {
  if (cfg.preset.empty()) throw ConfigError("no --preset given");
  return systems::load_preset(cfg.preset, cfg.presets_dir);
}

int cmd_presets(const RunConfig& cfg) {
  for (const std::string& name : systems::list_presets(cfg.presets_dir)) {
    std::cout << name << "\n";
  }
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  const systems::Preset preset = load_preset_or_exit(cfg);
  const sim::SimOptions opts = sim_options(cfg, preset);
  Rng rng(cfg.seed);
  const State state0 = systems::sample_initial_condition(preset.spec, preset.sampling, rng);

  Trajectory traj;
  try {
    traj = sim::simulate(preset.spec, preset.truth, state0, opts);
  } catch (const SimulationError& err) {
    std::cerr << "simulation failed: " << err.what() << "\n";
    return kExitSimulation;
  }
  traj.meta.seed = cfg.seed;
  traj.meta.spec_hash = json_io::spec_hash(preset.spec);

  fs::create_directories(cfg.out_dir);
  json_io::write_file(cfg.out_dir + "/trajectory.json", json_io::to_json(traj));

  std::vector<std::vector<double>> rows;
  for (const State& s : traj.states) {
    const double energy = dynamics::total_energy(preset.spec, preset.truth, s);
    const double phi_inf =
        preset.spec.n_constraints() == 0
            ? 0.0
            : dynamics::equality_constraints(preset.spec, s.x).lpNorm<Eigen::Infinity>();
    double pen_max = 0.0;
    for (const auto& c : systems::detect_contacts(preset.spec, s.x).contacts) {
      pen_max = std::max(pen_max, c.penetration);
    }
    rows.push_back({s.t, energy, phi_inf, pen_max});
  }
  write_csv(cfg.out_dir + "/energy.csv", "t,energy,phi_inf,penetration_max", rows);
  std::cout << "wrote " << cfg.out_dir << "/trajectory.json and energy.csv\n";
  return 0;
}

int cmd_generate(const RunConfig& cfg) {
  const systems::Preset preset = load_preset_or_exit(cfg);
  const sim::SimOptions opts = sim_options(cfg, preset);
  const sim::Dataset dataset =
      sim::generate_dataset(preset, opts, cfg.n_traj, cfg.t_chunk, cfg.seed);
  fs::create_directories(cfg.out_dir);
  json_io::write_file(cfg.out_dir + "/dataset.json", json_io::to_json(dataset));
  int with = 0;
  for (const auto& c : dataset.chunks) with += c.has_collision ? 1 : 0;
  std::cout << "wrote " << cfg.out_dir << "/dataset.json (" << dataset.chunks.size()
            << " chunks, " << with << " with collisions)\n";
  return 0;
}

int cmd_fit(const RunConfig& cfg) {
  if (cfg.data_path.empty() || !fs::exists(cfg.data_path)) {
    std::cerr << "fit: missing --data dataset file\n";
    return kExitMissingInput;
  }
  const systems::Preset preset = load_preset_or_exit(cfg);
  const sim::Dataset dataset = json_io::dataset_from_json(json_io::read_file(cfg.data_path));

  learn::FitOptions options;
  options.epochs = cfg.epochs;
  options.lr = cfg.lr;
  options.threads = cfg.threads;
  options.noise_sigma = cfg.noise_sigma;
  options.noise_seed = cfg.seed + 1;
  options.sim = dataset.options;
  options.sim.epsilon = cfg.variant == "cmr" ? cfg.epsilon : 0.0;
  options.sim.k_steps = cfg.k_steps > 0 ? cfg.k_steps : dataset.options.k_steps;
  options.sim.solver_tol = cfg.solver_tol;
  options.sim.solver_max_iter = cfg.solver_max_iter;
  options.verbose = cfg.verbose;

  const learn::FitReport report = learn::fit(preset.spec, dataset, cfg.seed, options);

  fs::create_directories(cfg.out_dir);
  json_io::write_file(cfg.out_dir + "/fit_report.json", json_io::to_json(report));
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < report.losses.size(); ++i) {
    rows.push_back({static_cast<double>(i), report.losses[i], report.rel_errors[i]});
  }
  write_csv(cfg.out_dir + "/losses.csv", "epoch,loss,rel_err", rows);
  std::cout << "wrote " << cfg.out_dir << "/fit_report.json and losses.csv\n";
  return 0;
}

int cmd_eval(const RunConfig& cfg) {
  if (cfg.data_path.empty() || !fs::exists(cfg.data_path)) {
    std::cerr << "eval: missing --data dataset file\n";
    return kExitMissingInput;
  }
  const systems::Preset preset = load_preset_or_exit(cfg);
  const sim::Dataset dataset = json_io::dataset_from_json(json_io::read_file(cfg.data_path));
  const learn::ParamLayout layout = learn::layout_for(preset.spec);

  PhysParams params;
  if (cfg.use_truth) {
    params = preset.truth;
  } else {
    if (cfg.report_path.empty() || !fs::exists(cfg.report_path)) {
      std::cerr << "eval: missing --report fit report (or pass --truth)\n";
      return kExitMissingInput;
    }
    params = json_io::fit_report_from_json(json_io::read_file(cfg.report_path)).decoded;
  }

  sim::SimOptions rollout = dataset.options;
  rollout.epsilon = cfg.variant == "cmr" ? cfg.epsilon : 0.0;
  const Eigen::VectorXd theta = learn::encode(params, layout);
  const learn::LossDetail detail = learn::trajectory_loss_detail(
      theta, layout, preset.spec, dataset, rollout, cfg.threads);

  json_io::json summary;
  summary["schema_version"] = 1;
  summary["preset"] = preset.name;
  summary["loss"] = detail.total;
  summary["mean_rel_error"] = detail.mean_rel();
  summary["failed_chunks"] = detail.failed_chunks;
  summary["params"] = json_io::to_json(params);
  summary["truth"] = json_io::to_json(preset.truth);
  json_io::json per_class = json_io::json::array();
  for (int c = 0; c < preset.spec.n_contact_classes(); ++c) {
    per_class.push_back({{"class", c},
                         {"mu", params.mu[c]},
                         {"mu_truth", preset.truth.mu[c]},
                         {"e_p", params.e_p[c]},
                         {"e_p_truth", preset.truth.e_p[c]}});
  }
  summary["contact_classes"] = per_class;
  summary["mass_ratios"] = json_io::to_json(learn::mass_ratios(params));
  summary["mass_ratios_truth"] = json_io::to_json(learn::mass_ratios(preset.truth));

  fs::create_directories(cfg.out_dir);
  json_io::write_file(cfg.out_dir + "/eval.json", summary);
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < detail.rel_per_chunk.size(); ++i) {
    rows.push_back({static_cast<double>(i), detail.rel_per_chunk[i]});
  }
  write_csv(cfg.out_dir + "/eval.csv", "chunk,rel_err", rows);
  std::cout << "wrote " << cfg.out_dir << "/eval.json and eval.csv\n";
  return 0;
}

int cmd_plan(const RunConfig& cfg) {
  const plan::TaskKind kind = plan::task_kind_from_name(cfg.task);
  plan::PlanTask task = plan::make_task(kind);
  task.sim.solver_tol = cfg.solver_tol;
  task.sim.solver_max_iter = cfg.solver_max_iter;

  const Eigen::VectorXd init = plan::default_decision(task);
  const plan::PlanResult result = plan::plan(task, init, cfg.iters, cfg.plan_lr, cfg.threads);

  fs::create_directories(cfg.out_dir);
  json_io::json doc;
  doc["schema_version"] = 1;
  doc["task"] = cfg.task;
  doc["decision"] = json_io::to_json(result.best_decision);
  doc["best_loss"] = result.best_loss;
  json_io::write_file(cfg.out_dir + "/decision.json", doc);

  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < result.losses.size(); ++i) {
    rows.push_back({static_cast<double>(i), result.losses[i], result.best_losses[i]});
  }
  write_csv(cfg.out_dir + "/plan_loss.csv", "iter,loss,best_loss", rows);

  const State best_state = plan::decision_to_state(task, result.best_decision);
  Trajectory rollout = sim::simulate(task.spec, task.params, best_state, task.sim);
  rollout.meta.spec_hash = json_io::spec_hash(task.spec);
  json_io::write_file(cfg.out_dir + "/rollout.json", json_io::to_json(rollout));
  std::cout << "wrote " << cfg.out_dir << "/decision.json, plan_loss.csv, rollout.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differentiable rigid-body contact simulator"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;

  // The config file seeds defaults; explicit flags override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  }
  if (!config_path.empty()) {
    try {
      apply_config_file(cfg, config_path);
    } catch (const std::exception& err) {
      std::cerr << "bad config file: " << err.what() << "\n";
      return kExitConfig;
    }
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (defaults layer)");
    sub->add_option("--preset", cfg.preset, "preset name or path");
    sub->add_option("--presets-dir", cfg.presets_dir, "preset directory");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--dt", cfg.dt, "integrator step (0 = preset default)");
    sub->add_option("--variant", cfg.variant, "contact model: cm or cmr")
        ->check(CLI::IsMember({"cm", "cmr"}));
    sub->add_option("--epsilon", cfg.epsilon, "CMr ridge regularization");
    sub->add_option("--mode", cfg.mode, "dynamics: lagrangian or hamiltonian")
        ->check(CLI::IsMember({"lagrangian", "hamiltonian"}));
    sub->add_option("--k-steps", cfg.k_steps, "penetration fixing steps (0 = auto)");
    sub->add_option("--solver-tol", cfg.solver_tol, "impulse solver tolerance");
    sub->add_option("--solver-max-iter", cfg.solver_max_iter, "impulse solver cap");
    sub->add_option("--threads", cfg.threads, "worker cap");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_flag("--verbose", cfg.verbose, "progress output");
  };

  CLI::App* presets = app.add_subcommand("presets", "list available presets");
  presets->add_option("--presets-dir", cfg.presets_dir, "preset directory");

  CLI::App* simulate = app.add_subcommand("simulate", "roll out one trajectory; "
                                          "writes trajectory.json and energy.csv "
                                          "(columns t,energy,phi_inf,penetration_max)");
  add_common(simulate);
  simulate->add_option("--steps", cfg.steps, "number of steps");

  CLI::App* generate = app.add_subcommand("generate", "generate a training dataset; "
                                          "writes dataset.json");
  add_common(generate);
  generate->add_option("--steps", cfg.steps, "rollout length per trajectory");
  generate->add_option("--n-traj", cfg.n_traj, "number of trajectories/chunks");
  generate->add_option("--t-chunk", cfg.t_chunk, "states per chunk");

  CLI::App* fit = app.add_subcommand("fit", "fit parameters to a dataset; writes "
                                     "fit_report.json and losses.csv (epoch,loss,rel_err)");
  add_common(fit);
  fit->add_option("--data", cfg.data_path, "dataset.json path");
  fit->add_option("--epochs", cfg.epochs, "max epochs");
  fit->add_option("--lr", cfg.lr, "learning rate");
  fit->add_option("--noise-sigma", cfg.noise_sigma, "observation noise added at load");

  CLI::App* eval = app.add_subcommand("eval", "evaluate parameters on a held-out dataset; "
                                      "writes eval.json and eval.csv (chunk,rel_err)");
  add_common(eval);
  eval->add_option("--data", cfg.data_path, "dataset.json path");
  eval->add_option("--report", cfg.report_path, "fit_report.json path");
  eval->add_flag("--truth", cfg.use_truth, "evaluate the preset's true parameters");

  CLI::App* planc = app.add_subcommand("plan", "gradient-based planning; writes "
                                       "decision.json, plan_loss.csv (iter,loss,best_loss) "
                                       "and rollout.json");
  add_common(planc);
  planc->add_option("--task", cfg.task, "billiards, throw_hit or throw_vertical");
  planc->add_option("--iters", cfg.iters, "gradient iterations");
  planc->add_option("--plan-lr", cfg.plan_lr, "decision learning rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (presets->parsed()) return cmd_presets(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (generate->parsed()) return cmd_generate(cfg);
    if (fit->parsed()) return cmd_fit(cfg);
    if (eval->parsed()) return cmd_eval(cfg);
    if (planc->parsed()) return cmd_plan(cfg);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const SimulationError& err) {
    std::cerr << "simulation failed: " << err.what() << "\n";
    return kExitSimulation;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSimulation;
  }
  return 0;
}

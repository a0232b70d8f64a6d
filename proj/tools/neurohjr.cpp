// NeuroHJR command-line harness: grid HJR solving, network training,
// closed-loop simulation, the baseline comparison and the sensor ablation.
//
// Exit codes: 0 success, 1 validation-suite failure, 2 configuration error,
// 3 numerical failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "neurohjr/checkpoint.hpp"
#include "neurohjr/config.hpp"
#include "neurohjr/gradcheck.hpp"
#include "neurohjr/manifest.hpp"
#include "neurohjr/rng.hpp"

namespace fs = std::filesystem;
using namespace neurohjr;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  long long seed_override = -1;
  bool quiet = false;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void say(const CommonOpts& opts, const std::string& msg) {
  if (!opts.quiet) std::cout << msg << "\n";
}

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg = parse_config_file(opts.config_path);
  if (opts.seed_override >= 0) {
    const auto s = static_cast<std::uint64_t>(opts.seed_override);
    cfg.training.seed = s;
    cfg.simulation.seed = s;
    cfg.environment.placement_seed = s;
  }
  return cfg;
}

std::string joined(const CommonOpts& opts, const std::string& name) {
  return (fs::path(opts.out_dir) / name).string();
}

Manifest start_manifest(const CommonOpts& opts, const ExperimentConfig& cfg,
                        const std::string& command) {
  fs::create_directories(opts.out_dir);
  Manifest m;
  m.command = command;
  m.resolved_config = cfg.resolved_text();
  m.add_input(opts.config_path);
  return m;
}

/// Loads the oracle composite field: from the configured file when given
/// (missing file is a configuration error), otherwise by solving in-process.
ValueField obtain_composite(const ExperimentConfig& cfg, const Environment& env,
                            Manifest& manifest, const CommonOpts& opts) {
  if (!cfg.composite_field_path.empty()) {
    if (!fs::exists(cfg.composite_field_path)) {
      throw ConfigError("composite field file not found: " +
                            cfg.composite_field_path,
                        0);
    }
    manifest.add_input(cfg.composite_field_path);
    return load_value_field(cfg.composite_field_path);
  }
  say(opts, "solving oracle fields...");
  const auto t0 = Clock::now();
  SolvedFields fields = solve_fields(env, cfg.grid);
  manifest.timings_s["solve_s"] = seconds_since(t0);
  return std::move(fields.composite);
}

NeuroResources load_neuro_resources(const ExperimentConfig& cfg,
                                    const Environment& env,
                                    Manifest& manifest) {
  if (cfg.checkpoint_path.empty()) {
    throw ConfigError("neurohjr controller requires a checkpoint path", 0);
  }
  if (!fs::exists(cfg.checkpoint_path)) {
    throw ConfigError("checkpoint not found: " + cfg.checkpoint_path, 0);
  }
  manifest.add_input(cfg.checkpoint_path);
  Checkpoint ck = load_checkpoint(cfg.checkpoint_path);
  return NeuroResources{std::move(ck.params), InputScaler{env.bounds()}};
}

int cmd_solve(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_config(opts);
  const Environment env = cfg.environment.realize();
  Manifest manifest = start_manifest(opts, cfg, "solve");

  const auto t0 = Clock::now();
  const SolvedFields fields = solve_fields(env, cfg.grid);
  manifest.timings_s["solve_s"] = seconds_since(t0);

  const std::string f_fwd = joined(opts, "forward_field.txt");
  const std::string f_bwd = joined(opts, "backward_field.txt");
  const std::string f_cmp = joined(opts, "composite_field.txt");
  save_value_field(fields.forward, f_fwd);
  save_value_field(fields.backward, f_bwd);
  save_value_field(fields.composite, f_cmp);
  manifest.add_output(f_fwd);
  manifest.add_output(f_bwd);
  manifest.add_output(f_cmp);
  manifest.write(joined(opts, "manifest_solve.json"));
  say(opts, "wrote " + f_fwd + ", " + f_bwd + ", " + f_cmp);
  return 0;
}

int cmd_train(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_config(opts);
  const Environment env = cfg.environment.realize();
  Manifest manifest = start_manifest(opts, cfg, "train");

  const ValueField composite = obtain_composite(cfg, env, manifest, opts);
  say(opts, "training...");
  const auto t0 = Clock::now();
  TrainResult result = train(env, composite, cfg.training);
  manifest.timings_s["train_s"] = seconds_since(t0);

  const std::string f_ck = joined(opts, "checkpoint.nhjr");
  const std::string f_hist = joined(opts, "loss_history.csv");
  save_checkpoint(f_ck, Checkpoint{std::move(result.params),
                                   std::move(result.adam)});
  write_loss_history_csv(f_hist, result.history);
  manifest.add_output(f_ck);
  manifest.add_output(f_hist);
  manifest.write(joined(opts, "manifest_train.json"));
  char buf[120];
  std::snprintf(buf, sizeof buf, "final total loss %.6g over %zu epochs",
                result.history.back().total, result.history.size());
  say(opts, buf);
  return 0;
}

int cmd_simulate(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_config(opts);
  const Environment env = cfg.environment.realize();
  Manifest manifest = start_manifest(opts, cfg, "simulate");
  if (cfg.episodes < 1) throw ConfigError("episodes must be >= 1", 0);

  std::optional<NeuroResources> neuro;
  std::optional<ClassicalResources> classical;
  if (cfg.simulation.controller == ControllerKind::kNeuroHjr) {
    neuro = load_neuro_resources(cfg, env, manifest);
  } else {
    const auto t0 = Clock::now();
    SolvedFields fields = solve_fields(env, cfg.grid);
    manifest.timings_s["solve_s"] = seconds_since(t0);
    classical = ClassicalResources{std::move(fields.forward),
                                   std::move(fields.composite),
                                   cfg.grid.horizon_backward, cfg.grid.dt(),
                                   cfg.grid.alpha};
  }

  const auto t0 = Clock::now();
  std::vector<EpisodeSummary> summaries;
  for (int k = 0; k < cfg.episodes; ++k) {
    SimConfig sim = cfg.simulation;
    sim.seed = mix_seed(cfg.simulation.seed, static_cast<std::uint64_t>(k));
    const EpisodeResult ep = neuro ? run_episode(env, sim, *neuro)
                                   : run_episode(env, sim, *classical);
    char name[64];
    std::snprintf(name, sizeof name, "trajectory_%03d.csv", k);
    const std::string f_traj = joined(opts, name);
    write_trajectory_csv(f_traj, ep);
    manifest.add_output(f_traj);
    summaries.push_back(summarize(
        k,
        cfg.simulation.controller == ControllerKind::kNeuroHjr ? "neurohjr"
                                                               : "classical",
        ep));
  }
  manifest.timings_s["simulate_s"] = seconds_since(t0);

  const std::string f_sum = joined(opts, "summary.csv");
  write_episode_summary_csv(f_sum, summaries);
  manifest.add_output(f_sum);
  manifest.write(joined(opts, "manifest_simulate.json"));
  for (const EpisodeSummary& s : summaries) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "episode %d: reached=%d travel=%.1fs path=%.1fm clearance=%.2fm",
                  s.run_id, s.reached_goal ? 1 : 0, s.travel_time,
                  s.path_length, s.min_clearance);
    say(opts, buf);
  }
  return 0;
}

int cmd_compare(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_config(opts);
  Manifest manifest = start_manifest(opts, cfg, "compare");
  if (cfg.environment.random_obstacles < 1) {
    throw ConfigError(
        "compare requires random_obstacles >= 1 in [environment]", 0);
  }
  if (cfg.compare_runs < 1) throw ConfigError("compare runs must be >= 1", 0);

  SimConfig neuro_cfg = cfg.simulation;
  neuro_cfg.controller = ControllerKind::kNeuroHjr;
  SimConfig classical_cfg = cfg.simulation;
  classical_cfg.controller = ControllerKind::kClassical;

  say(opts, "running Monte Carlo comparison (training one network per run)...");
  const auto t0 = Clock::now();
  const ComparisonResult result = run_monte_carlo(
      cfg.environment.as_template(), cfg.compare_runs,
      cfg.environment.placement_seed, cfg.grid, cfg.training, neuro_cfg,
      classical_cfg);
  manifest.timings_s["compare_s"] = seconds_since(t0);

  const std::string f_runs = joined(opts, "compare_runs.csv");
  const std::string f_sum = joined(opts, "compare_summary.csv");
  write_comparison_csv(f_runs, result);
  write_comparison_summary_csv(f_sum, result);
  manifest.add_output(f_runs);
  manifest.add_output(f_sum);
  manifest.write(joined(opts, "manifest_compare.json"));

  char buf[240];
  std::snprintf(buf, sizeof buf,
                "mean travel: neurohjr %.1fs vs classical %.1fs "
                "(reduction %.1f%%); mean path: %.1fm vs %.1fm (%.2f%%)",
                result.mean_travel_first, result.mean_travel_second,
                result.travel_reduction_pct, result.mean_path_first,
                result.mean_path_second, result.path_efficiency_pct);
  say(opts, buf);
  return 0;
}

int cmd_ablate(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_config(opts);
  const Environment env = cfg.environment.realize();
  Manifest manifest = start_manifest(opts, cfg, "ablate");
  if (cfg.ablation_radii.empty()) throw ConfigError("ablation radii empty", 0);

  const NeuroResources neuro = load_neuro_resources(cfg, env, manifest);
  const auto t0 = Clock::now();
  const auto rows =
      run_ablation(env, cfg.ablation_radii, cfg.simulation, neuro);
  manifest.timings_s["ablate_s"] = seconds_since(t0);

  const std::string f_abl = joined(opts, "ablation.csv");
  write_ablation_csv(f_abl, rows);
  manifest.add_output(f_abl);
  manifest.write(joined(opts, "manifest_ablate.json"));
  for (const AblationRow& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "rho=%.1fm: travel=%.1fs path=%.1fm reached=%d",
                  r.sensor_radius, r.travel_time, r.path_length,
                  r.reached_goal ? 1 : 0);
    say(opts, buf);
  }
  return 0;
}

int cmd_checkgrad(std::uint64_t seed, int batch, const CommonOpts& opts) {
  const GradCheckReport report = run_gradient_checks(seed, batch);
  std::cout << report.to_string();
  if (!opts.out_dir.empty() && opts.out_dir != "out") {
    fs::create_directories(opts.out_dir);
    write_file_atomic(joined(opts, "checkgrad_report.txt"), report.to_string());
  }
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NeuroHJR: physics-informed HJ reachability for 2D obstacle avoidance"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::uint64_t cg_seed = 1;
  int cg_batch = 8;

  auto add_common = [&](CLI::App* sub, bool need_config) {
    auto* c = sub->add_option("--config", opts.config_path, "configuration file");
    if (need_config) c->required();
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--seed", opts.seed_override,
                    "override training/simulation/placement seeds");
    sub->add_flag("--quiet", opts.quiet, "suppress progress output");
  };

  auto* solve = app.add_subcommand("solve", "solve the grid HJR fields");
  add_common(solve, true);
  auto* train_cmd = app.add_subcommand("train", "train the NeuroHJR network");
  add_common(train_cmd, true);
  auto* simulate = app.add_subcommand("simulate", "run closed-loop episodes");
  add_common(simulate, true);
  auto* compare = app.add_subcommand("compare", "Monte Carlo baseline comparison");
  add_common(compare, true);
  auto* ablate = app.add_subcommand("ablate", "sensor-radius ablation");
  add_common(ablate, true);
  auto* checkgrad = app.add_subcommand("checkgrad", "finite-difference gradient validation");
  add_common(checkgrad, false);
  checkgrad->add_option("--batch", cg_batch, "batch size for the checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(opts);
    if (train_cmd->parsed()) return cmd_train(opts);
    if (simulate->parsed()) return cmd_simulate(opts);
    if (compare->parsed()) return cmd_compare(opts);
    if (ablate->parsed()) return cmd_ablate(opts);
    if (checkgrad->parsed()) {
      if (opts.seed_override >= 0) {
        cg_seed = static_cast<std::uint64_t>(opts.seed_override);
      }
      return cmd_checkgrad(cg_seed, cg_batch, opts);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

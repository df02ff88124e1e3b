#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>

#include "pipgscp/artifacts.hpp"

namespace pipgscp::cli {

namespace fs = std::filesystem;

namespace {

struct Options
{
  std::string config;
  std::vector<std::string> overrides;
  std::string out_dir;
  int workers = -1;
  long long seed = -1;
};

RunConfig resolve(const Options& opt)
{
  RunConfig cfg = load_config(opt.config, opt.overrides);
  if (!opt.out_dir.empty()) {
    cfg.io.out_dir = opt.out_dir;
  }
  if (opt.workers >= 0) {
    cfg.montecarlo.workers = opt.workers;
  }
  if (opt.seed >= 0) {
    cfg.montecarlo.seed = static_cast<std::uint64_t>(opt.seed);
  }
  return cfg;
}

int cmd_solve(const Options& opt, std::ostream& out)
{
  const RunConfig cfg = resolve(opt);
  const fs::path dir = cfg.io.out_dir;

  const ScpResult res = scp_solve(cfg.problem, cfg.scp);
  const Solution sol = extract_solution(res.trajectory, res.grid);
  const ShootingReport shoot = single_shoot(cfg.problem, sol);
  const ConstraintAudit audit = audit_constraints(cfg.problem, sol, res.scaling, &shoot);

  write_trajectory_csv(dir / "trajectory.csv", sol);
  if (cfg.io.dense_trajectory) {
    write_shooting_csv(dir / "shooting.csv", shoot);
  }
  write_iterations_jsonl(dir / "iterations.jsonl", res.records);
  write_json(dir / "config.json", to_json(cfg));
  write_json(dir / "summary.json", solve_summary(cfg, res, sol, shoot, audit));

  out << std::setprecision(6) << "status " << to_string(res.status) << " after "
      << res.records.size() << " SCP iterations\n"
      << "t_f " << sol.time_of_flight << " s\n"
      << "shooting error " << shoot.terminal_position_error << " m, "
      << shoot.terminal_velocity_error << " m/s\n"
      << "min keepout distance " << audit.min_keepout_distance << " m\n"
      << "artifacts in " << dir.string() << '\n';
  return res.status == ScpStatus::Converged ? kExitConverged : kExitNotConverged;
}

int cmd_montecarlo(const Options& opt, std::ostream& out)
{
  const RunConfig cfg = resolve(opt);
  const fs::path dir = cfg.io.out_dir;

  const MonteCarloReport rep = monte_carlo(cfg.montecarlo_config());

  write_samples_csv(dir / "samples.csv", rep);
  write_json(dir / "aggregate.json", to_json(rep.aggregate));
  write_json(dir / "config.json", to_json(cfg));
  write_json(dir / "summary.json", {{"version", version()},
                                     {"aggregate", to_json(rep.aggregate)},
                                     {"config", to_json(cfg)}});
  if (cfg.io.sample_trajectories) {
    for (const auto& s : rep.samples) {
      if (s.outcome == SampleOutcome::Failed) {
        continue;
      }
      char stem[32];
      std::snprintf(stem, sizeof stem, "sample_%04d", s.index);
      write_trajectory_csv(dir / "samples" / (std::string(stem) + "_trajectory.csv"), s.solution);
      if (cfg.io.dense_trajectory) {
        write_shooting_csv(dir / "samples" / (std::string(stem) + "_shooting.csv"), s.shooting);
      }
    }
  }

  const auto& a = rep.aggregate;
  out << std::setprecision(6) << "converged " << a.n_converged << "/" << a.n_samples
      << " (failed " << a.n_failed << ")\n"
      << "SCP iterations " << a.iters_mean << " +- " << a.iters_std << '\n'
      << "terminal position error " << a.term_pos_err_mean_m << " +- " << a.term_pos_err_std_m
      << " m\n"
      << "terminal velocity error " << a.term_vel_err_mean_mps << " m/s\n"
      << "artifacts in " << dir.string() << '\n';
  return kExitConverged;
}

int cmd_check(const Options& opt, std::ostream& out)
{
  const RunConfig cfg = resolve(opt);
  out << to_json(cfg).dump(2) << '\n' << "config ok\n";
  return kExitConverged;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Impulsive rendezvous trajectory optimization with SCP and PIPG", "pipgscp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  Options opt;
  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("config", opt.config, "JSON config file; defaults apply when omitted");
    sub->add_option("--set", opt.overrides, "override a config value, e.g. scp.k_max=200")
        ->allow_extra_args(false);
    sub->add_option("--out", opt.out_dir, "output directory (io.out_dir)");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one rendezvous and verify it by single shooting");
  add_common(solve);
  CLI::App* mc = app.add_subcommand("montecarlo", "run the initial-position dispersion campaign");
  add_common(mc);
  mc->add_option("--workers", opt.workers, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  mc->add_option("--seed", opt.seed, "random seed")->check(CLI::NonNegativeNumber);
  CLI::App* check = app.add_subcommand("check", "validate a config and print the resolved values");
  add_common(check);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(opt, out);
    }
    if (mc->parsed()) {
      return cmd_montecarlo(opt, out);
    }
    return cmd_check(opt, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace pipgscp::cli

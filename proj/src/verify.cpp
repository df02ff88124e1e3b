#include "pipgscp/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace pipgscp {

namespace {

double positive_part(double x)
{
  return x > 0.0 ? x : 0.0;
}

double max_or_zero(const std::vector<double>& v)
{
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

// ----------------------------------------------------------------------------
// Single shooting
// ----------------------------------------------------------------------------

ShootingReport single_shoot(const ProblemSpec& spec, const Solution& sol, int substeps)
{
  if (substeps < 1) {
    throw std::invalid_argument("single_shoot: substeps must be at least 1");
  }
  if (sol.node_times.size() != sol.burns.size() + 1 || sol.states.size() != sol.node_times.size()) {
    throw std::invalid_argument("single_shoot: solution node, burn and time counts disagree");
  }

  ShootingReport rep;
  Vec6 x = State{spec.r_init, spec.v_init}.stacked();
  std::vector<std::pair<double, Vec6>> steps;

  auto record_defect = [&](std::size_t k) {
    const Vec6 node = sol.states[k].stacked();
    rep.node_position_defects.push_back((x.head<3>() - node.head<3>()).norm());
    rep.node_velocity_defects.push_back((x.tail<3>() - node.tail<3>()).norm());
  };

  for (std::size_t k = 0; k < sol.burns.size(); ++k) {
    const double t0 = sol.node_times[k];
    record_defect(k);
    rep.samples.push_back({t0, x});
    x = apply_impulse(x, sol.burns[k].dv);
    rep.samples.push_back({t0, x});

    steps.clear();
    x = propagate_cw(spec.cw, x, sol.node_times[k + 1] - t0, substeps, &steps);
    for (const auto& [dt, xs] : steps) {
      rep.samples.push_back({t0 + dt, xs});
    }
  }
  record_defect(sol.burns.size());

  rep.terminal_state = x;
  rep.terminal_position_error = x.head<3>().norm();
  rep.terminal_velocity_error = x.tail<3>().norm();
  return rep;
}

// ----------------------------------------------------------------------------
// Constraint audit
// ----------------------------------------------------------------------------

double ConstraintAudit::max_burn_excess() const { return max_or_zero(burn_excess); }
double ConstraintAudit::max_speed_excess() const { return max_or_zero(speed_excess); }
double ConstraintAudit::max_keepout_intrusion() const { return max_or_zero(keepout_intrusion); }
double ConstraintAudit::max_dilation_excess() const { return max_or_zero(dilation_excess); }

bool ConstraintAudit::nodes_feasible(double scaled_tol, double keepout_tol_m) const
{
  return max_scaled_violation <= scaled_tol && max_keepout_intrusion() <= keepout_tol_m;
}

ConstraintAudit audit_constraints(const ProblemSpec& spec, const Solution& sol,
                                  const ScalingFactors& scaling, const ShootingReport* dense)
{
  scaling.validate();
  const std::size_t K = sol.states.size();
  if (K < 2 || sol.burns.size() != K - 1 || sol.dilations.size() != K - 1) {
    throw std::invalid_argument("audit_constraints: solution node, burn and dilation counts disagree");
  }

  ConstraintAudit a;
  double scaled = 0.0;

  for (const Burn& b : sol.burns) {
    a.burn_excess.push_back(positive_part(b.dv.norm() - spec.u_max));
    scaled = std::max(scaled, a.burn_excess.back() / scaling.control.maxCoeff());
  }
  for (double s : sol.dilations) {
    a.dilation_excess.push_back(positive_part(std::max(spec.sigma_min - s, s - spec.sigma_max)));
    scaled = std::max(scaled, a.dilation_excess.back() / scaling.dilation);
  }

  a.min_keepout_distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < K; ++k) {
    const State& s = sol.states[k];
    const bool interior = k > 0 && k + 1 < K;
    a.speed_excess.push_back(interior ? positive_part(s.v.norm() - spec.v_max) : 0.0);
    scaled = std::max(scaled, a.speed_excess.back() / scaling.state[3]);
    const double dist = (s.r - spec.r_keepout).norm();
    a.keepout_intrusion.push_back(positive_part(spec.rho_keepout - dist));
    a.min_keepout_distance = std::min(a.min_keepout_distance, dist);
  }

  const Vec6 first = sol.states.front().stacked() - State{spec.r_init, spec.v_init}.stacked();
  const Vec6 last = sol.states.back().stacked();
  a.boundary_error = std::max(first.lpNorm<Eigen::Infinity>(), last.lpNorm<Eigen::Infinity>());
  scaled = std::max(scaled, first.cwiseQuotient(scaling.state).lpNorm<Eigen::Infinity>());
  scaled = std::max(scaled, last.cwiseQuotient(scaling.state).lpNorm<Eigen::Infinity>());
  a.max_scaled_violation = scaled;

  if (dense != nullptr && !dense->samples.empty()) {
    a.has_intersample = true;
    a.intersample_min_keepout_distance = std::numeric_limits<double>::infinity();
    for (const auto& smp : dense->samples) {
      a.intersample_max_speed = std::max(a.intersample_max_speed, smp.x.tail<3>().norm());
      a.intersample_min_keepout_distance =
          std::min(a.intersample_min_keepout_distance, (smp.x.head<3>() - spec.r_keepout).norm());
    }
    a.intersample_speed_excess = positive_part(a.intersample_max_speed - spec.v_max);
    a.intersample_keepout_intrusion =
        positive_part(spec.rho_keepout - a.intersample_min_keepout_distance);
  }
  return a;
}

// ----------------------------------------------------------------------------
// Monte Carlo
// ----------------------------------------------------------------------------

void MonteCarloConfig::validate() const
{
  if (n_samples < 1) {
    throw std::invalid_argument("MonteCarloConfig: n_samples must be at least 1");
  }
  if (!(position_std > 0.0) || !std::isfinite(position_std)) {
    throw std::invalid_argument("MonteCarloConfig: position_std must be positive");
  }
  if (workers < 0) {
    throw std::invalid_argument("MonteCarloConfig: workers must be non-negative");
  }
  spec.validate();
  scp.validate();
}

std::string to_string(SampleOutcome outcome)
{
  switch (outcome) {
    case SampleOutcome::Converged:
      return "converged";
    case SampleOutcome::MaxIterations:
      return "max_iters";
    case SampleOutcome::Failed:
      return "failed";
  }
  return "unknown";
}

Vec3 sample_initial_position(const Vec3& mean, double std_dev, std::uint64_t seed, int index)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> normal(0.0, std_dev);
  Vec3 r;
  for (int i = 0; i < 3; ++i) {
    r[i] = mean[i] + normal(gen);
  }
  return r;
}

MonteCarloSample run_sample(const ProblemSpec& spec, const ScpConfig& scp, int index)
{
  MonteCarloSample s;
  s.index = index;
  s.r_init = spec.r_init;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ScpResult res = scp_solve(spec, scp);
    s.outcome = res.status == ScpStatus::Converged ? SampleOutcome::Converged
                                                   : SampleOutcome::MaxIterations;
    s.iterations = static_cast<int>(res.records.size());
    s.solution = extract_solution(res.trajectory, res.grid);
    s.shooting = single_shoot(spec, s.solution);
    s.terminal_position_error = s.shooting.terminal_position_error;
    s.terminal_velocity_error = s.shooting.terminal_velocity_error;
    s.time_of_flight = s.solution.time_of_flight;
  } catch (const std::exception& e) {
    s.outcome = SampleOutcome::Failed;
    s.error = e.what();
  }
  s.solve_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

MonteCarloAggregate aggregate(const std::vector<MonteCarloSample>& samples)
{
  MonteCarloAggregate agg;
  agg.n_samples = static_cast<int>(samples.size());
  std::vector<double> iters;
  std::vector<double> pos;
  std::vector<double> vel;
  double tof = 0.0;
  for (const auto& s : samples) {
    if (s.outcome == SampleOutcome::Failed) {
      ++agg.n_failed;
    }
    if (s.outcome != SampleOutcome::Converged) {
      continue;
    }
    iters.push_back(s.iterations);
    pos.push_back(s.terminal_position_error);
    vel.push_back(s.terminal_velocity_error);
    tof += s.time_of_flight;
  }
  agg.n_converged = static_cast<int>(iters.size());
  if (iters.empty()) {
    return agg;
  }

  // Population statistics.
  auto stats = [](const std::vector<double>& v, double& mean, double& sd) {
    const Eigen::Map<const VecX> m(v.data(), static_cast<Index>(v.size()));
    mean = m.mean();
    sd = std::sqrt((m.array() - mean).square().mean());
  };
  stats(iters, agg.iters_mean, agg.iters_std);
  stats(pos, agg.term_pos_err_mean_m, agg.term_pos_err_std_m);
  stats(vel, agg.term_vel_err_mean_mps, agg.term_vel_err_std_mps);
  agg.tof_mean_s = tof / static_cast<double>(iters.size());
  return agg;
}

MonteCarloReport monte_carlo(const MonteCarloConfig& cfg)
{
  cfg.validate();
  const int n = cfg.n_samples;
  int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n);

  MonteCarloReport rep;
  rep.samples.resize(static_cast<std::size_t>(n));
  std::atomic<int> next{0};

  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      ProblemSpec spec = cfg.spec;
      spec.r_init = sample_initial_position(cfg.spec.r_init, cfg.position_std, cfg.seed, i);
      rep.samples[static_cast<std::size_t>(i)] = run_sample(spec, cfg.scp, i);
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back(work);
  }
  work();
  for (auto& t : pool) {
    t.join();
  }

  rep.aggregate = aggregate(rep.samples);
  return rep;
}

}  // namespace pipgscp

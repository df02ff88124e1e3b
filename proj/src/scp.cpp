#include "pipgscp/scp.hpp"

#include <chrono>
#include <cmath>

namespace pipgscp {

void ScpConfig::validate() const
{
  if (nodes < 3) {
    throw std::invalid_argument("ScpConfig: need at least three nodes");
  }
  if (!(eps_trust_region > 0.0) || !(eps_virtual_control > 0.0) || !(eps_virtual_buffer > 0.0)) {
    throw std::invalid_argument("ScpConfig: convergence tolerances must be positive");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("ScpConfig: max_iterations must be at least 1");
  }
  if (substeps < 1) {
    throw std::invalid_argument("ScpConfig: substeps must be at least 1");
  }
  weights.validate();
  pipg.validate();
}

std::string to_string(ScpStatus status)
{
  switch (status) {
    case ScpStatus::Converged:
      return "converged";
    case ScpStatus::MaxIterations:
      return "max_iters";
  }
  return "unknown";
}

ReferenceTrajectory initial_guess(const ProblemSpec& spec, const ScpConfig& config)
{
  const int K = config.nodes;
  ReferenceTrajectory ref;
  ref.states.resize(static_cast<std::size_t>(K));
  ref.impulses.assign(static_cast<std::size_t>(K - 1), Impulse{});
  ref.dilations.assign(static_cast<std::size_t>(K - 1), 0.5 * (spec.sigma_min + spec.sigma_max));

  const double pushed = spec.rho_keepout + 1.0;
  for (int k = 0; k < K; ++k) {
    const double remaining = 1.0 - static_cast<double>(k) / (K - 1);
    State s{remaining * spec.r_init, remaining * spec.v_init};
    const Vec3 d = s.r - spec.r_keepout;
    const double dist = d.norm();
    if (dist < spec.rho_keepout) {
      const Vec3 dir = dist > 0.0 ? Vec3(d / dist) : Vec3::UnitX();
      s.r = spec.r_keepout + pushed * dir;
    }
    ref.states[static_cast<std::size_t>(k)] = s;
  }
  return ref;
}

double trust_region_radius(const ReferenceTrajectory& next, const ReferenceTrajectory& prev,
                           const ScalingFactors& scaling)
{
  next.validate_shape();
  if (next.nodes() != prev.nodes()) {
    throw std::invalid_argument("trust_region_radius: trajectories differ in node count");
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < next.states.size(); ++k) {
    sq += (next.states[k].stacked() - prev.states[k].stacked())
              .cwiseQuotient(scaling.state)
              .squaredNorm();
  }
  for (std::size_t k = 0; k < next.impulses.size(); ++k) {
    sq += (next.impulses[k].dv - prev.impulses[k].dv).cwiseQuotient(scaling.control).squaredNorm();
    const double ds = (next.dilations[k] - prev.dilations[k]) / scaling.dilation;
    sq += ds * ds;
  }
  return std::sqrt(sq);
}

ScpResult scp_solve(const ProblemSpec& spec, const ScpConfig& config,
                    const SubproblemObserver& observer)
{
  spec.validate();
  config.validate();

  ScpResult out;
  out.grid = config.time_grid == GridKind::UnitIntervals ? TimeGrid::unit_intervals(config.nodes)
                                                          : TimeGrid::uniform(config.nodes);
  out.scaling = compute_scaling(spec);
  const VariableLayout layout(config.nodes);
  const Vec6& px = out.scaling.state;

  ReferenceTrajectory ref = initial_guess(spec, config);
  pipg::PrimalDualPoint warm;

  for (int it = 1; it <= config.max_iterations; ++it) {
    const auto t0 = std::chrono::steady_clock::now();

    const DiscreteSystem sys = discretize_all(ref, out.grid, spec.cw, config.substeps);
    const ReferenceTrajectory scaled_ref = scale_trajectory(ref, out.scaling);
    const pipg::ConicProgram prog = assemble(scaled_ref, scale_system(sys, out.scaling), spec,
                                             out.scaling, config.weights, layout);
    if (it == 1) {
      warm = pipg::PrimalDualPoint::zeros(prog);
    }

    const pipg::SolveResult res = pipg::pipg_solve(prog, config.pipg, warm);
    if (observer) {
      observer(SubproblemTrace{it, &prog, &warm, &res});
    }

    const SubproblemSolution sol = decode(res.point.primal, layout);
    ReferenceTrajectory next = unscale_trajectory(sol.trajectory, out.scaling);

    ScpIterationRecord rec;
    rec.iteration = it;
    rec.trust_region_radius = trust_region_radius(next, ref, out.scaling);
    rec.vc_norm1 = sol.virtual_control.lpNorm<1>();
    rec.vb_norm1 = sol.virtual_buffer.lpNorm<1>();
    for (Index i = 0; i < sol.virtual_control.size(); ++i) {
      rec.vc_norm1_physical += std::abs(sol.virtual_control[i]) * px[i % 6];
    }
    rec.vb_norm1_physical = rec.vb_norm1 * out.scaling.buffer;
    rec.objective = subproblem_objective(sol, scaled_ref, config.weights);
    rec.pipg_eq_residual = res.diagnostics.eq_residual;
    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.records.push_back(rec);

    ref = std::move(next);
    warm = res.point;
    out.virtual_control = sol.virtual_control;
    out.virtual_buffer = sol.virtual_buffer;

    if (rec.trust_region_radius < config.eps_trust_region &&
        rec.vc_norm1 < config.eps_virtual_control && rec.vb_norm1 < config.eps_virtual_buffer) {
      out.status = ScpStatus::Converged;
      break;
    }
  }

  out.trajectory = std::move(ref);
  return out;
}

Solution extract_solution(const ReferenceTrajectory& ref, const TimeGrid& grid)
{
  ref.validate_shape();
  if (grid.nodes() != ref.nodes()) {
    throw std::invalid_argument("extract_solution: grid and reference node counts differ");
  }
  Solution sol;
  sol.states = ref.states;
  sol.dilations = ref.dilations;
  const DilationProfile profile{ref.dilations, grid};
  const auto durations = interval_durations(profile);
  double t = 0.0;
  sol.node_times.push_back(t);
  for (std::size_t k = 0; k < durations.size(); ++k) {
    sol.burns.push_back(Burn{t, ref.impulses[k].dv});
    t += durations[k];
    sol.node_times.push_back(t);
  }
  sol.time_of_flight = time_of_flight(profile);
  return sol;
}

}  // namespace pipgscp

#pragma once

#include "pipgscp/scp.hpp"

/// The first SCP subproblem of the nominal case, with every intermediate kept.
struct FirstSubproblem
{
  pipgscp::ProblemSpec spec;
  pipgscp::ScpConfig config;
  pipgscp::TimeGrid grid;
  pipgscp::ReferenceTrajectory ref;
  pipgscp::ReferenceTrajectory scaled_ref;
  pipgscp::DiscreteSystem sys;
  pipgscp::DiscreteSystem scaled_sys;
  pipgscp::ScalingFactors scaling;
  pipgscp::VariableLayout layout{2};
  pipgscp::pipg::ConicProgram prog;
};

inline FirstSubproblem first_subproblem(const pipgscp::ProblemSpec& spec = {},
                                        const pipgscp::ScpConfig& config = {})
{
  using namespace pipgscp;
  FirstSubproblem f;
  f.spec = spec;
  f.config = config;
  f.grid = config.time_grid == GridKind::UnitIntervals ? TimeGrid::unit_intervals(config.nodes)
                                                       : TimeGrid::uniform(config.nodes);
  f.ref = initial_guess(spec, config);
  f.scaling = compute_scaling(spec);
  f.sys = discretize_all(f.ref, f.grid, spec.cw, config.substeps);
  f.scaled_ref = scale_trajectory(f.ref, f.scaling);
  f.scaled_sys = scale_system(f.sys, f.scaling);
  f.layout = VariableLayout(config.nodes);
  f.prog = assemble(f.scaled_ref, f.scaled_sys, spec, f.scaling, config.weights, f.layout);
  return f;
}

/// Per-coordinate physical size of one scaled unit of z.
inline pipgscp::VecX variable_scales(const pipgscp::ScalingFactors& s,
                                     const pipgscp::VariableLayout& layout)
{
  using namespace pipgscp;
  VecX d(layout.size());
  const int K = layout.nodes();
  for (int k = 0; k < K; ++k) {
    d.segment<6>(layout.x(k)) = s.state;
    d[layout.vb(k)] = s.buffer;
    if (k + 1 < K) {
      d.segment<3>(layout.u(k)) = s.control;
      d[layout.sigma(k)] = s.dilation;
      d.segment<6>(layout.vc(k)) = s.state;
      d.segment<6>(layout.gamma(k)) = s.state;
    }
  }
  return d;
}

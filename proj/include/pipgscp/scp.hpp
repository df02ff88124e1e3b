#pragma once

/**
 * @file scp.hpp
 * @brief Sequential convex programming loop for free-final-time impulsive
 *        rendezvous with PIPG subproblem solves.
 */

#include <functional>
#include <string>
#include <vector>

#include "pipgscp/pipg.hpp"
#include "pipgscp/problem.hpp"
#include "pipgscp/subproblem.hpp"

namespace pipgscp {

enum class GridKind
{
  /// every interval spans one unit of dilated time; sigma_k is its duration
  UnitIntervals,
  /// 0 = tau_1 < ... < tau_K = 1 with uniform spacing
  Normalized,
};

struct ScpConfig
{
  /// K
  int nodes = 15;
  SubproblemWeights weights;
  pipg::SolverSettings pipg;
  /// convergence thresholds, scaled units
  double eps_trust_region = 1e-3;
  double eps_virtual_control = 1e-6;
  double eps_virtual_buffer = 1e-6;
  int max_iterations = 30;
  /// RK4 substeps per interval in the discretization
  int substeps = kDefaultSubsteps;
  GridKind time_grid = GridKind::UnitIntervals;

  void validate() const;
};

struct ScpIterationRecord
{
  int iteration = 0;
  double trust_region_radius = 0.0;
  /// ||nu^c||_1, scaled
  double vc_norm1 = 0.0;
  /// ||nu^b||_1, scaled; nu^b >= 0 so this is its sum
  double vb_norm1 = 0.0;
  /// same quantities in physical units (m, m/s and m)
  double vc_norm1_physical = 0.0;
  double vb_norm1_physical = 0.0;
  double objective = 0.0;
  /// ||H z - h||_inf after the PIPG solve
  double pipg_eq_residual = 0.0;
  double wall_time_s = 0.0;
};

enum class ScpStatus
{
  Converged,
  MaxIterations,
};

std::string to_string(ScpStatus status);

struct ScpResult
{
  ScpStatus status = ScpStatus::MaxIterations;
  /// last accepted reference, physical units
  ReferenceTrajectory trajectory;
  std::vector<ScpIterationRecord> records;
  TimeGrid grid;
  ScalingFactors scaling;
  /// last subproblem's virtual terms, scaled
  VecX virtual_control;
  VecX virtual_buffer;
};

/// What the loop saw on one subproblem; handed to an optional observer.
struct SubproblemTrace
{
  int iteration = 0;
  const pipg::ConicProgram* program = nullptr;
  const pipg::PrimalDualPoint* warmstart = nullptr;
  const pipg::SolveResult* result = nullptr;
};

using SubproblemObserver = std::function<void(const SubproblemTrace&)>;

/**
 * @brief Straight-line initial guess.
 *
 * Positions and velocities interpolate linearly from the initial state to
 * the origin, burns are zero, dilations sit at the midpoint of their bounds.
 * Nodes inside the keepout are pushed radially to rho_c + 1 m.
 */
ReferenceTrajectory initial_guess(const ProblemSpec& spec, const ScpConfig& config);

/// 2-norm of the stacked scaled deviations of states, burns and dilations.
double trust_region_radius(const ReferenceTrajectory& next, const ReferenceTrajectory& prev,
                           const ScalingFactors& scaling);

/**
 * @brief Run SCP until the trust-region radius and both virtual-term norms
 *        fall below their thresholds, or the iteration cap is reached.
 *
 * Each subproblem is warm-started from the previous primal-dual pair.
 * Propagates SingularLinearizationError and pipg::DivergenceError.
 */
ScpResult scp_solve(const ProblemSpec& spec, const ScpConfig& config,
                    const SubproblemObserver& observer = {});

struct Burn
{
  /// wall-clock time of the burn, s
  double time = 0.0;
  Vec3 dv = Vec3::Zero();
};

/// Wall-clock view of a trajectory: burn schedule, node times and t_f.
struct Solution
{
  std::vector<State> states;
  std::vector<Burn> burns;
  std::vector<double> node_times;
  std::vector<double> dilations;
  double time_of_flight = 0.0;
};

Solution extract_solution(const ReferenceTrajectory& ref, const TimeGrid& grid);

}  // namespace pipgscp

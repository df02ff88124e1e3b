#pragma once

/**
 * @file verify.hpp
 * @brief Single-shooting feasibility check, node constraint audit and the
 *        Monte Carlo dispersion campaign.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "pipgscp/scp.hpp"

namespace pipgscp {

inline constexpr int kShootingSubsteps = 100;

struct ShootingSample
{
  double t = 0.0;
  Vec6 x = Vec6::Zero();
};

struct ShootingReport
{
  /// ||r(t_f)||, m
  double terminal_position_error = 0.0;
  /// ||v(t_f)||, m/s
  double terminal_velocity_error = 0.0;
  /// ||r_shoot(t_k) - r_k|| and ||v_shoot(t_k) - v_k|| per node, pre-burn
  std::vector<double> node_position_defects;
  std::vector<double> node_velocity_defects;
  Vec6 terminal_state = Vec6::Zero();
  /// Dense trajectory. Each node appears twice (before and after its burn)
  /// so the speed trace keeps its jumps.
  std::vector<ShootingSample> samples;
};

/**
 * @brief Fly the burn schedule through the CW dynamics from (r_i, v_i).
 *
 * Burn k is applied at node k, then the unforced dynamics are integrated
 * with RK4 over the interval duration.
 */
ShootingReport single_shoot(const ProblemSpec& spec, const Solution& sol,
                            int substeps = kShootingSubsteps);

/**
 * @brief Node constraint violations, plus intersample ones as information.
 *
 * Excess values are max(0, value - bound) in physical units. Scaled values
 * divide by the scaling used for the subproblem.
 */
struct ConstraintAudit
{
  /// per burn, m/s
  std::vector<double> burn_excess;
  /// per node, m/s; boundary nodes are fixed data and report 0
  std::vector<double> speed_excess;
  /// per node, rho_c - ||r_k - r_c|| clipped at 0, m
  std::vector<double> keepout_intrusion;
  /// per interval, distance outside [sigma_min, sigma_max], s
  std::vector<double> dilation_excess;
  /// largest deviation of the first and last node from the boundary data
  double boundary_error = 0.0;

  double min_keepout_distance = 0.0;
  /// max over burns, speeds, dilations and boundary data in scaled units
  double max_scaled_violation = 0.0;

  /// informational, filled only when a dense trajectory was supplied
  bool has_intersample = false;
  double intersample_max_speed = 0.0;
  double intersample_speed_excess = 0.0;
  double intersample_min_keepout_distance = 0.0;
  double intersample_keepout_intrusion = 0.0;

  double max_burn_excess() const;
  double max_speed_excess() const;
  double max_keepout_intrusion() const;
  double max_dilation_excess() const;

  /// Scaled node violations within `scaled_tol` and keepout intrusion within
  /// `keepout_tol_m`.
  bool nodes_feasible(double scaled_tol, double keepout_tol_m) const;
};

ConstraintAudit audit_constraints(const ProblemSpec& spec, const Solution& sol,
                                  const ScalingFactors& scaling,
                                  const ShootingReport* dense = nullptr);

struct MonteCarloConfig
{
  int n_samples = 128;
  /// per-axis standard deviation of the initial position, m
  double position_std = 25.0;
  std::uint64_t seed = 20240607;
  /// template; r_init is the mean of the dispersion
  ProblemSpec spec;
  ScpConfig scp = [] {
    ScpConfig c;
    c.max_iterations = 30;
    return c;
  }();
  /// 0 picks the hardware concurrency
  int workers = 0;

  void validate() const;
};

enum class SampleOutcome
{
  Converged,
  MaxIterations,
  /// the sample threw; see `error`
  Failed,
};

std::string to_string(SampleOutcome outcome);

struct MonteCarloSample
{
  int index = 0;
  Vec3 r_init = Vec3::Zero();
  SampleOutcome outcome = SampleOutcome::Failed;
  std::string error;
  int iterations = 0;
  double terminal_position_error = 0.0;
  double terminal_velocity_error = 0.0;
  double time_of_flight = 0.0;
  double solve_time_s = 0.0;
  Solution solution;
  ShootingReport shooting;
};

/// Statistics over converged samples only.
struct MonteCarloAggregate
{
  int n_samples = 0;
  int n_converged = 0;
  int n_failed = 0;
  double iters_mean = 0.0;
  double iters_std = 0.0;
  double term_pos_err_mean_m = 0.0;
  double term_pos_err_std_m = 0.0;
  double term_vel_err_mean_mps = 0.0;
  double term_vel_err_std_mps = 0.0;
  double tof_mean_s = 0.0;
};

struct MonteCarloReport
{
  /// sorted by index
  std::vector<MonteCarloSample> samples;
  MonteCarloAggregate aggregate;
};

/// Initial position of sample `index`. Each sample owns a generator seeded
/// from (seed, index), so the draw does not depend on scheduling.
Vec3 sample_initial_position(const Vec3& mean, double std_dev, std::uint64_t seed, int index);

/// Solve, shoot and audit one rendezvous.
MonteCarloSample run_sample(const ProblemSpec& spec, const ScpConfig& scp, int index);

MonteCarloAggregate aggregate(const std::vector<MonteCarloSample>& samples);

/// Runs every sample on a pool of worker threads. Sample failures are
/// recorded, not thrown; the report is independent of the worker count.
MonteCarloReport monte_carlo(const MonteCarloConfig& cfg);

}  // namespace pipgscp

#pragma once

/**
 * @file dynamics.hpp
 * @brief Clohessy-Wiltshire relative motion with impulsive velocity changes.
 *
 * Frame: x radial, y along-track, z orbit normal. States are kept in SI
 * units (m, m/s); scaling only happens when a subproblem is assembled.
 */

#include <vector>

#include "pipgscp/time_grid.hpp"
#include "pipgscp/types.hpp"

namespace pipgscp {

struct CwParams
{
  /// mean motion of the target orbit, 1/s
  double mean_motion = 0.00113;

  void validate() const;
};

struct State
{
  Vec3 r = Vec3::Zero();
  Vec3 v = Vec3::Zero();

  Vec6 stacked() const;
  static State from(const Vec6& x);
};

struct Impulse
{
  Vec3 dv = Vec3::Zero();
};

/// Unforced CW vector field f(x).
Vec6 cw_deriv(const CwParams& params, const Vec6& x);

/// Constant Jacobian df/dx of the CW field.
Mat6 cw_jacobian(const CwParams& params);

/// df/du = [0; I] for a continuous acceleration input.
Mat63 cw_control_jacobian();

/// Velocity jump of an impulsive burn; position is unchanged.
State apply_impulse(const State& state, const Impulse& impulse);
Vec6 apply_impulse(const Vec6& x, const Vec3& dv);

/// Fixed-step RK4 propagation of the unforced CW dynamics over `duration`
/// seconds. If `samples` is non-null, every substep end point is appended
/// as (elapsed time, state).
Vec6 propagate_cw(const CwParams& params, const Vec6& x0, double duration, int substeps,
                  std::vector<std::pair<double, Vec6>>* samples = nullptr);

/// Zero-order-hold dilation factors over a normalized time grid.
struct DilationProfile
{
  std::vector<double> sigmas;
  TimeGrid grid;

  /// Throws std::invalid_argument when a factor leaves [sigma_min, sigma_max]
  /// or the factor count does not match the grid.
  void validate(double sigma_min, double sigma_max) const;
};

/// Wall-clock length of each interval, sigma_k (tau_{k+1} - tau_k).
std::vector<double> interval_durations(const DilationProfile& profile);

/// Integral of the dilation factor over [0, 1].
double time_of_flight(const DilationProfile& profile);

}  // namespace pipgscp

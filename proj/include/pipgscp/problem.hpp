#pragma once

/**
 * @file problem.hpp
 * @brief Rendezvous problem data and the SCP reference trajectory.
 */

#include <vector>

#include "pipgscp/dynamics.hpp"
#include "pipgscp/types.hpp"

namespace pipgscp {

/// Rendezvous to the origin with zero relative velocity. Defaults are the
/// nominal case.
struct ProblemSpec
{
  CwParams cw;
  Vec3 r_init{150.0, 1000.0, 200.0};
  Vec3 v_init = Vec3::Zero();
  /// max speed at the nodes, m/s
  double v_max = 0.5;
  /// max delta-v per burn, m/s
  double u_max = 0.1;
  Vec3 r_keepout{0.0, 300.0, 0.0};
  /// keepout radius, m
  double rho_keepout = 200.0;
  /// dilation bounds, s
  double sigma_min = 100.0;
  double sigma_max = 300.0;

  /// Bounds and boundary data. Throws std::invalid_argument naming the first
  /// violated condition (including an initial point inside the keepout or an
  /// initial speed above v_max).
  void validate() const;
};

/// Linearization point of one SCP iteration: K node states (pre-burn),
/// K-1 burns and K-1 dilation factors.
struct ReferenceTrajectory
{
  std::vector<State> states;
  std::vector<Impulse> impulses;
  std::vector<double> dilations;

  int nodes() const { return static_cast<int>(states.size()); }

  /// Throws std::invalid_argument when the counts are inconsistent.
  void validate_shape() const;
};

}  // namespace pipgscp

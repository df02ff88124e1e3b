#pragma once

/**
 * @file discretize.hpp
 * @brief Inverse-free exact discretization of the time-dilated, linearized
 *        CW dynamics.
 *
 * On each interval the augmented initial value problem
 *
 *     xbar'  = sigma_bar f(xbar)
 *     Psi_A' = A(tau) Psi_A,          Psi_A(tau_k) = I
 *     Psi_S' = A(tau) Psi_S + S(tau), Psi_S(tau_k) = 0
 *     Psi_c' = A(tau) Psi_c + c(tau), Psi_c(tau_k) = 0
 *
 * with A = sigma_bar df/dx, S = f(xbar), c = -A xbar is integrated with RK4
 * from the post-burn reference state. The result gives
 *
 *     x_{k+1} = A_k x_k + B_k u_k + S_k sigma_k + c_k
 *
 * where B_k is the velocity block (last three columns) of A_k.
 */

#include <vector>

#include "pipgscp/dynamics.hpp"
#include "pipgscp/problem.hpp"
#include "pipgscp/time_grid.hpp"

namespace pipgscp {

inline constexpr int kDefaultSubsteps = 20;

struct IntervalMatrices
{
  Mat6 A;
  Vec6 S;
  Vec6 c;
};

struct DiscreteSystem
{
  std::vector<Mat6> A;
  std::vector<Mat63> B;
  std::vector<Vec6> S;
  std::vector<Vec6> c;

  int intervals() const { return static_cast<int>(A.size()); }
};

/// Throws std::invalid_argument for sigma_bar <= 0, tau1 <= tau0 or
/// substeps < 1.
IntervalMatrices discretize_interval(const State& node_state, const Impulse& impulse,
                                     double sigma_bar, double tau0, double tau1,
                                     const CwParams& params, int substeps = kDefaultSubsteps);

/// Columns 4-6 of A_k.
Mat63 extract_B(const Mat6& A);

/// All K-1 intervals of the reference.
DiscreteSystem discretize_all(const ReferenceTrajectory& ref, const TimeGrid& grid,
                              const CwParams& params, int substeps = kDefaultSubsteps);

}  // namespace pipgscp

#pragma once

/**
 * @file subproblem.hpp
 * @brief Scaling and parsing of the discretized convex subproblem into the
 *        PIPG canonical form.
 *
 * Decision vector layout (K nodes, all quantities scaled):
 *
 *     z = (x_1..x_K, u_1..u_{K-1}, sigma_1..sigma_{K-1},
 *          nu^c_1..nu^c_{K-1}, Gamma_1..Gamma_{K-1}, nu^b_1..nu^b_K)
 *
 * Gamma bounds |nu^c| elementwise so that w_vc 1'Gamma is the 1-norm penalty.
 */

#include <stdexcept>

#include "pipgscp/discretize.hpp"
#include "pipgscp/pipg.hpp"
#include "pipgscp/problem.hpp"

namespace pipgscp {

/// Unit of nu^b chosen by compute_scaling. The keepout slack carries no
/// quadratic term, so under a fixed PIPG iteration budget its decay rate is
/// set by w_vb in these units; one centimeter keeps the penalty exact.
inline constexpr double kBufferUnit = 0.01;

/// Diagonal change of variables x = P_x x~, u = P_u u~, sigma = P_sigma sigma~.
struct ScalingFactors
{
  Vec6 state = Vec6::Ones();
  Vec3 control = Vec3::Ones();
  double dilation = 1.0;

  /// unit of the virtual buffer nu^b, m
  double buffer = 1.0;

  void validate() const;
};

struct SubproblemWeights
{
  /// trust region
  double trust_region = 0.005;
  /// virtual control
  double virtual_control = 13.0;
  /// virtual buffer
  double virtual_buffer = 0.001;

  void validate() const;
};

/// Offsets of each variable block inside z. Node and interval indices are
/// zero-based.
class VariableLayout
{
public:
  explicit VariableLayout(int nodes);

  int nodes() const { return nodes_; }
  Index size() const { return size_; }

  Index x(int k) const { return 6 * k; }
  Index r(int k) const { return x(k); }
  Index v(int k) const { return x(k) + 3; }
  Index u(int k) const { return u0_ + 3 * k; }
  Index sigma(int k) const { return sigma0_ + k; }
  Index vc(int k) const { return vc0_ + 6 * k; }
  Index gamma(int k) const { return gamma0_ + 6 * k; }
  Index vb(int k) const { return vb0_ + k; }

  Index state_block_size() const { return u0_; }
  Index control_block_size() const { return sigma0_ - u0_; }
  Index dilation_block_size() const { return vc0_ - sigma0_; }

private:
  int nodes_;
  Index u0_;
  Index sigma0_;
  Index vc0_;
  Index gamma0_;
  Index vb0_;
  Index size_;
};

/// Primal solution of one subproblem, unpacked from z.
struct SubproblemSolution
{
  /// scaled states, burns and dilations
  ReferenceTrajectory trajectory;
  VecX virtual_control;
  VecX gamma;
  VecX virtual_buffer;
};

class SingularLinearizationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Position entries max(|r_i|, |r_c| + rho_c) per axis, velocity entries
/// v_max, control entries u_max, dilation sigma_max, buffer kBufferUnit.
ScalingFactors compute_scaling(const ProblemSpec& spec);

DiscreteSystem scale_system(const DiscreteSystem& sys, const ScalingFactors& s);
DiscreteSystem unscale_system(const DiscreteSystem& sys, const ScalingFactors& s);

ReferenceTrajectory scale_trajectory(const ReferenceTrajectory& ref, const ScalingFactors& s);
ReferenceTrajectory unscale_trajectory(const ReferenceTrajectory& ref, const ScalingFactors& s);

/**
 * @brief Linearized keepout as a halfspace over (r, nu^b) in physical units.
 *
 * Encodes ||rbar - r_c|| + g'(r - rbar) + nu^b >= rho_c with
 * g = (rbar - r_c)/||rbar - r_c|| as  n'(r, nu^b) <= offset.
 * Throws SingularLinearizationError when ||rbar - r_c|| <= 1e-6 m.
 */
struct KeepoutHalfspace
{
  Vec4 normal;
  double offset = 0.0;
};

KeepoutHalfspace keepout_halfspace(const Vec3& ref_r, const ProblemSpec& spec);

/**
 * @brief Build the PIPG program for one SCP iteration.
 *
 * `scaled_ref` and `scaled_sys` must already be in scaled units. Boundary
 * nodes carry singletons only; the keepout and speed sets act on the
 * interior nodes, before the burn.
 */
pipg::ConicProgram assemble(const ReferenceTrajectory& scaled_ref,
                            const DiscreteSystem& scaled_sys,
                            const ProblemSpec& spec,
                            const ScalingFactors& scaling,
                            const SubproblemWeights& weights,
                            const VariableLayout& layout);

SubproblemSolution decode(const VecX& z, const VariableLayout& layout);
VecX encode(const SubproblemSolution& sol, const VariableLayout& layout);

/// Subproblem cost evaluated term by term (scaled units):
/// sum ||u||^2 + w_tr (deviation) + w_vc ||nu^c||_1 + w_vb sum nu^b.
double subproblem_objective(const SubproblemSolution& sol,
                            const ReferenceTrajectory& scaled_ref,
                            const SubproblemWeights& weights);

}  // namespace pipgscp

#pragma once

/**
 * @file pipg.hpp
 * @brief Proportional-integral projected gradient (PIPG) conic solver.
 *
 * Solves
 *
 *     minimize    1/2 z' P z + q' z
 *     subject to  H z - h = 0,  z in D
 *
 * where P is diagonal and D is a Cartesian product of sets with closed-form
 * projections. Only matrix-vector products and projections are used.
 */

#include <stdexcept>
#include <string>
#include <vector>

#include "pipgscp/projection.hpp"
#include "pipgscp/types.hpp"

namespace pipgscp::pipg {

struct ConicProgram
{
  /// diagonal of P, elementwise >= 0
  VecX quad_diag;
  /// q
  VecX linear;
  /// H
  SparseMat eq_matrix;
  /// h
  VecX eq_offset;
  /// product set D; coordinates covered by no set are unconstrained
  std::vector<ProjectableSet> sets;

  Index dim_primal() const { return quad_diag.size(); }
  Index dim_dual() const { return eq_offset.size(); }

  /// Throws std::invalid_argument on inconsistent sizes, negative curvature,
  /// invalid sets or overlapping set coordinates.
  void validate() const;

  /// z <- pi_D(z). `scratch` is resized as needed.
  void project(VecX& z, VecX& scratch_in, VecX& scratch_out) const;
  VecX project(const VecX& z) const;

  /// 1/2 z' P z + q' z
  double objective(const VecX& z) const;
};

struct SolverSettings
{
  /// extrapolation
  double rho = 1.65;
  /// dual-to-primal step-size ratio
  double omega = 375.0;
  int k_max = 100;
  double power_iter_tol = 1e-6;
  int power_iter_max = 200;
  /// multiplies the power-iteration estimate of max spec H'H
  double spectral_margin = 1.1;

  void validate() const;
};

struct PrimalDualPoint
{
  VecX primal;
  VecX dual;

  static PrimalDualPoint zeros(const ConicProgram& prog);
};

struct PowerIterationResult
{
  double eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Estimate of the largest eigenvalue of H'H from an all-ones start vector.
/// Non-convergence is reported through `converged`, not an exception.
PowerIterationResult power_iteration(const SparseMat& H, double tol, int max_iter);

struct StepSizes
{
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha = 2 / (lambda + sqrt(lambda^2 + 4 omega sigma)), beta = omega alpha.
StepSizes step_sizes(double lambda_p, double sigma_h, double omega);

struct SolveDiagnostics
{
  int iterations = 0;
  double alpha = 0.0;
  double beta = 0.0;
  /// max spec P
  double lambda_p = 0.0;
  /// margin-inflated estimate of max spec H'H
  double sigma_spectral = 0.0;
  bool power_iteration_converged = false;
  /// ||H z - h||_inf at the returned primal
  double eq_residual = 0.0;
  double objective = 0.0;
};

struct SolveResult
{
  PrimalDualPoint point;
  SolveDiagnostics diagnostics;
};

class DivergenceError : public std::runtime_error
{
public:
  explicit DivergenceError(int iteration);
  int iteration() const { return iteration_; }

private:
  int iteration_;
};

/**
 * @brief Run exactly settings.k_max PIPG iterations from the warm start.
 *
 * There is no stopping criterion. The returned primal is the output of the
 * last projection, so it lies in D exactly. Throws DivergenceError when a
 * non-finite iterate appears.
 */
SolveResult pipg_solve(const ConicProgram& prog, const SolverSettings& settings,
                       const PrimalDualPoint& warmstart);

struct KktResiduals
{
  /// ||H z - h||_inf
  double primal_eq = 0.0;
  /// ||z - pi_D(z - (P z + q + H' w))||_inf
  double stationarity = 0.0;
};

KktResiduals kkt_residuals(const ConicProgram& prog, const PrimalDualPoint& point);

/**
 * @brief Change of variables z = D y for a diagonal D > 0.
 *
 * Returns the program in y. Balls require D to be uniform over their
 * coordinates; throws std::invalid_argument otherwise.
 */
ConicProgram rescale_variables(const ConicProgram& prog, const VecX& d);

}  // namespace pipgscp::pipg

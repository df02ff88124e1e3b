#include "pipgscp/pipg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pipgscp::pipg {

// ----------------------------------------------------------------------------
// ConicProgram
// ----------------------------------------------------------------------------

void ConicProgram::validate() const
{
  const Index n = dim_primal();
  if (linear.size() != n) {
    throw std::invalid_argument("ConicProgram: linear cost length differs from primal dimension");
  }
  if ((quad_diag.array() < 0.0).any()) {
    throw std::invalid_argument("ConicProgram: quadratic diagonal must be nonnegative");
  }
  if (eq_matrix.rows() != eq_offset.size()) {
    throw std::invalid_argument("ConicProgram: equality matrix rows differ from offset length");
  }
  if (eq_matrix.cols() != n) {
    throw std::invalid_argument("ConicProgram: equality matrix columns differ from primal dimension");
  }
  std::vector<bool> covered(static_cast<std::size_t>(n), false);
  for (const auto& set : sets) {
    pipg::validate(set.shape);
    if (dimension(set.shape) != static_cast<Index>(set.indices.size())) {
      throw std::invalid_argument("ConicProgram: set dimension differs from its index count");
    }
    for (Index i : set.indices) {
      if (i < 0 || i >= n) {
        throw std::invalid_argument("ConicProgram: set index out of range");
      }
      if (covered[static_cast<std::size_t>(i)]) {
        throw std::invalid_argument("ConicProgram: coordinate " + std::to_string(i) +
                                    " governed by more than one set");
      }
      covered[static_cast<std::size_t>(i)] = true;
    }
  }
}

void ConicProgram::project(VecX& z, VecX& scratch_in, VecX& scratch_out) const
{
  for (const auto& set : sets) {
    const auto m = static_cast<Index>(set.indices.size());
    scratch_in.resize(m);
    scratch_out.resize(m);
    for (Index i = 0; i < m; ++i) {
      scratch_in[i] = z[set.indices[static_cast<std::size_t>(i)]];
    }
    project_into(set.shape, scratch_in, scratch_out);
    for (Index i = 0; i < m; ++i) {
      z[set.indices[static_cast<std::size_t>(i)]] = scratch_out[i];
    }
  }
}

VecX ConicProgram::project(const VecX& z) const
{
  VecX out = z;
  VecX a;
  VecX b;
  project(out, a, b);
  return out;
}

double ConicProgram::objective(const VecX& z) const
{
  return 0.5 * z.dot(quad_diag.cwiseProduct(z)) + linear.dot(z);
}

// ----------------------------------------------------------------------------
// Settings, step sizes, spectral estimate
// ----------------------------------------------------------------------------

void SolverSettings::validate() const
{
  if (!(rho >= 1.0 && rho < 2.0)) {
    throw std::invalid_argument("SolverSettings: rho must lie in [1, 2)");
  }
  if (!(omega > 0.0)) {
    throw std::invalid_argument("SolverSettings: omega must be positive");
  }
  if (k_max < 1) {
    throw std::invalid_argument("SolverSettings: k_max must be at least 1");
  }
  if (!(power_iter_tol > 0.0) || power_iter_max < 1) {
    throw std::invalid_argument("SolverSettings: invalid power-iteration controls");
  }
  if (!(spectral_margin >= 1.0)) {
    throw std::invalid_argument("SolverSettings: spectral_margin must be >= 1");
  }
}

PrimalDualPoint PrimalDualPoint::zeros(const ConicProgram& prog)
{
  return {VecX::Zero(prog.dim_primal()), VecX::Zero(prog.dim_dual())};
}

PowerIterationResult power_iteration(const SparseMat& H, double tol, int max_iter)
{
  if (H.cols() == 0 || H.nonZeros() == 0) {
    throw std::invalid_argument("power_iteration: H must be nonzero");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("power_iteration: tol must be positive");
  }
  PowerIterationResult result;
  VecX v = VecX::Ones(H.cols()).normalized();
  VecX hv(H.rows());
  VecX w(H.cols());
  double estimate = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    hv.noalias() = H * v;
    w.noalias() = H.transpose() * hv;
    const double next = v.dot(w);  // Rayleigh quotient, v is unit length
    const double wn = w.norm();
    result.iterations = it;
    if (wn == 0.0) {
      // Start vector in the null space; the estimate is exact for that subspace.
      result.eigenvalue = next;
      result.converged = true;
      return result;
    }
    v = w / wn;
    if (it > 1 && std::abs(next - estimate) <= tol * std::abs(next)) {
      result.eigenvalue = next;
      result.converged = true;
      return result;
    }
    estimate = next;
  }
  result.eigenvalue = estimate;
  return result;
}

StepSizes step_sizes(double lambda_p, double sigma_h, double omega)
{
  if (!(sigma_h > 0.0)) {
    throw std::invalid_argument("step_sizes: sigma_h must be positive");
  }
  if (!(omega > 0.0) || !(lambda_p >= 0.0)) {
    throw std::invalid_argument("step_sizes: need lambda_p >= 0 and omega > 0");
  }
  StepSizes s;
  s.alpha = 2.0 / (lambda_p + std::sqrt(lambda_p * lambda_p + 4.0 * omega * sigma_h));
  s.beta = omega * s.alpha;
  return s;
}

// ----------------------------------------------------------------------------
// Solver
// ----------------------------------------------------------------------------

DivergenceError::DivergenceError(int iteration)
    : std::runtime_error("PIPG diverged: non-finite iterate at iteration " +
                         std::to_string(iteration)),
      iteration_(iteration)
{}

SolveResult pipg_solve(const ConicProgram& prog, const SolverSettings& settings,
                       const PrimalDualPoint& warmstart)
{
  settings.validate();
  if (warmstart.primal.size() != prog.dim_primal() || warmstart.dual.size() != prog.dim_dual()) {
    throw std::invalid_argument("pipg_solve: warm start dimensions do not match the program");
  }

  const SparseMat& H = prog.eq_matrix;
  const SparseMat Ht = H.transpose();
  const VecX& P = prog.quad_diag;
  const VecX& q = prog.linear;
  const VecX& h = prog.eq_offset;

  SolveDiagnostics diag;
  diag.lambda_p = P.size() > 0 ? P.maxCoeff() : 0.0;
  const auto power = power_iteration(H, settings.power_iter_tol, settings.power_iter_max);
  diag.power_iteration_converged = power.converged;
  diag.sigma_spectral = settings.spectral_margin * power.eigenvalue;
  const auto steps = step_sizes(diag.lambda_p, diag.sigma_spectral, settings.omega);
  diag.alpha = steps.alpha;
  diag.beta = steps.beta;

  const double rho = settings.rho;
  VecX xi = warmstart.primal;
  VecX eta = warmstart.dual;
  VecX z(prog.dim_primal());
  VecX w(prog.dim_dual());
  VecX tmp_in;
  VecX tmp_out;

  for (int k = 1; k <= settings.k_max; ++k) {
    z.noalias() = Ht * eta;
    z = xi - steps.alpha * (P.cwiseProduct(xi) + q + z);
    prog.project(z, tmp_in, tmp_out);

    w.noalias() = H * (2.0 * z - xi);
    w = eta + steps.beta * (w - h);

    xi = (1.0 - rho) * xi + rho * z;
    eta = (1.0 - rho) * eta + rho * w;

    if (!z.allFinite() || !w.allFinite()) {
      throw DivergenceError(k);
    }
  }

  diag.iterations = settings.k_max;
  diag.eq_residual = prog.dim_dual() > 0 ? (H * z - h).lpNorm<Eigen::Infinity>() : 0.0;
  diag.objective = prog.objective(z);
  return {{std::move(z), std::move(w)}, diag};
}

KktResiduals kkt_residuals(const ConicProgram& prog, const PrimalDualPoint& point)
{
  const VecX& z = point.primal;
  const VecX& w = point.dual;
  KktResiduals r;
  r.primal_eq = prog.dim_dual() > 0
                    ? (prog.eq_matrix * z - prog.eq_offset).lpNorm<Eigen::Infinity>()
                    : 0.0;
  const VecX grad = prog.quad_diag.cwiseProduct(z) + prog.linear +
                    prog.eq_matrix.transpose() * w;
  r.stationarity = (z - prog.project(z - grad)).lpNorm<Eigen::Infinity>();
  return r;
}

// ----------------------------------------------------------------------------
// Change of variables
// ----------------------------------------------------------------------------

namespace {

VecX gather(const VecX& d, const std::vector<Index>& idx)
{
  VecX out(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out[static_cast<Index>(i)] = d[idx[i]];
  }
  return out;
}

}  // namespace

ConicProgram rescale_variables(const ConicProgram& prog, const VecX& d)
{
  if (d.size() != prog.dim_primal() || (d.array() <= 0.0).any()) {
    throw std::invalid_argument("rescale_variables: need a positive scale per primal coordinate");
  }
  ConicProgram out;
  out.quad_diag = prog.quad_diag.cwiseProduct(d).cwiseProduct(d);
  out.linear = prog.linear.cwiseProduct(d);
  out.eq_matrix = prog.eq_matrix * d.asDiagonal();
  out.eq_offset = prog.eq_offset;
  out.sets.reserve(prog.sets.size());
  for (const auto& set : prog.sets) {
    const VecX ds = gather(d, set.indices);
    const VecX inv = ds.cwiseInverse();
    SetShape shape = std::visit(
        [&](const auto& s) -> SetShape {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) {
            if (ds.size() > 0 && (ds.array() != ds[0]).any()) {
              throw std::invalid_argument("rescale_variables: non-uniform scale over a Ball");
            }
            const double f = ds.size() > 0 ? ds[0] : 1.0;
            return Ball{s.center / f, s.radius / f};
          } else if constexpr (std::is_same_v<T, Box>) {
            return Box{s.lower.cwiseProduct(inv), s.upper.cwiseProduct(inv)};
          } else if constexpr (std::is_same_v<T, Singleton>) {
            return Singleton{s.value.cwiseProduct(inv)};
          } else if constexpr (std::is_same_v<T, Halfspace>) {
            return Halfspace{s.normal.cwiseProduct(ds), s.offset};
          } else if constexpr (std::is_same_v<T, TwoHalfspaces>) {
            return TwoHalfspaces{s.normal1.cwiseProduct(ds), s.offset1,
                                 s.normal2.cwiseProduct(ds), s.offset2};
          } else {
            return s;
          }
        },
        set.shape);
    out.sets.push_back(ProjectableSet{std::move(shape), set.indices});
  }
  return out;
}

}  // namespace pipgscp::pipg

#include "pipgscp/subproblem.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pipgscp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKeepoutSingularity = 1e-6;

bool uniform(const Eigen::Ref<const VecX>& v)
{
  return (v.array() == v[0]).all();
}

}  // namespace

// ----------------------------------------------------------------------------
// Scaling
// ----------------------------------------------------------------------------

void ScalingFactors::validate() const
{
  if ((state.array() <= 0.0).any() || (control.array() <= 0.0).any() || !(dilation > 0.0) ||
      !(buffer > 0.0)) {
    throw std::invalid_argument("ScalingFactors: all factors must be strictly positive");
  }
}

void SubproblemWeights::validate() const
{
  if (!(trust_region > 0.0) || !(virtual_control > 0.0) || !(virtual_buffer > 0.0)) {
    throw std::invalid_argument("SubproblemWeights: weights must be positive");
  }
}

ScalingFactors compute_scaling(const ProblemSpec& spec)
{
  const Vec3 pos = spec.r_init.cwiseAbs().cwiseMax(
      (spec.r_keepout.cwiseAbs().array() + spec.rho_keepout).matrix());
  if (!(pos.minCoeff() > 0.0) || !(spec.v_max > 0.0) || !(spec.u_max > 0.0) || !(spec.sigma_max > 0.0)) {
    throw std::invalid_argument("compute_scaling: bounds must be positive");
  }
  ScalingFactors s;
  s.state << pos, spec.v_max, spec.v_max, spec.v_max;
  s.control.setConstant(spec.u_max);
  s.dilation = spec.sigma_max;
  s.buffer = kBufferUnit;
  return s;
}

DiscreteSystem scale_system(const DiscreteSystem& sys, const ScalingFactors& s)
{
  s.validate();
  const Vec6 inv = s.state.cwiseInverse();
  DiscreteSystem out;
  out.A.reserve(sys.A.size());
  for (std::size_t k = 0; k < sys.A.size(); ++k) {
    out.A.push_back(inv.asDiagonal() * sys.A[k] * s.state.asDiagonal());
    out.B.push_back(inv.asDiagonal() * sys.B[k] * s.control.asDiagonal());
    out.S.push_back(inv.cwiseProduct(sys.S[k]) * s.dilation);
    out.c.push_back(inv.cwiseProduct(sys.c[k]));
  }
  return out;
}

DiscreteSystem unscale_system(const DiscreteSystem& sys, const ScalingFactors& s)
{
  s.validate();
  const Vec6 inv = s.state.cwiseInverse();
  DiscreteSystem out;
  for (std::size_t k = 0; k < sys.A.size(); ++k) {
    out.A.push_back(s.state.asDiagonal() * sys.A[k] * inv.asDiagonal());
    out.B.push_back(s.state.asDiagonal() * sys.B[k] * s.control.cwiseInverse().asDiagonal());
    out.S.push_back(s.state.cwiseProduct(sys.S[k]) / s.dilation);
    out.c.push_back(s.state.cwiseProduct(sys.c[k]));
  }
  return out;
}

ReferenceTrajectory scale_trajectory(const ReferenceTrajectory& ref, const ScalingFactors& s)
{
  ReferenceTrajectory out = ref;
  for (auto& st : out.states) {
    st = State::from(st.stacked().cwiseQuotient(s.state));
  }
  for (auto& imp : out.impulses) {
    imp.dv = imp.dv.cwiseQuotient(s.control);
  }
  for (auto& sg : out.dilations) {
    sg /= s.dilation;
  }
  return out;
}

ReferenceTrajectory unscale_trajectory(const ReferenceTrajectory& ref, const ScalingFactors& s)
{
  ReferenceTrajectory out = ref;
  for (auto& st : out.states) {
    st = State::from(st.stacked().cwiseProduct(s.state));
  }
  for (auto& imp : out.impulses) {
    imp.dv = imp.dv.cwiseProduct(s.control);
  }
  for (auto& sg : out.dilations) {
    sg *= s.dilation;
  }
  return out;
}

// ----------------------------------------------------------------------------
// Layout
// ----------------------------------------------------------------------------

VariableLayout::VariableLayout(int nodes) : nodes_(nodes)
{
  if (nodes < 2) {
    throw std::invalid_argument("VariableLayout: need at least two nodes");
  }
  const Index K = nodes;
  u0_ = 6 * K;
  sigma0_ = u0_ + 3 * (K - 1);
  vc0_ = sigma0_ + (K - 1);
  gamma0_ = vc0_ + 6 * (K - 1);
  vb0_ = gamma0_ + 6 * (K - 1);
  size_ = vb0_ + K;
}

SubproblemSolution decode(const VecX& z, const VariableLayout& layout)
{
  if (z.size() != layout.size()) {
    throw std::invalid_argument("decode: primal vector does not match the layout");
  }
  const int K = layout.nodes();
  SubproblemSolution sol;
  auto& tr = sol.trajectory;
  tr.states.resize(static_cast<std::size_t>(K));
  tr.impulses.resize(static_cast<std::size_t>(K - 1));
  tr.dilations.resize(static_cast<std::size_t>(K - 1));
  for (int k = 0; k < K; ++k) {
    tr.states[static_cast<std::size_t>(k)] = State::from(z.segment<6>(layout.x(k)));
  }
  for (int k = 0; k + 1 < K; ++k) {
    tr.impulses[static_cast<std::size_t>(k)].dv = z.segment<3>(layout.u(k));
    tr.dilations[static_cast<std::size_t>(k)] = z[layout.sigma(k)];
  }
  sol.virtual_control = z.segment(layout.vc(0), 6 * (K - 1));
  sol.gamma = z.segment(layout.gamma(0), 6 * (K - 1));
  sol.virtual_buffer = z.segment(layout.vb(0), K);
  return sol;
}

VecX encode(const SubproblemSolution& sol, const VariableLayout& layout)
{
  const int K = layout.nodes();
  const auto& tr = sol.trajectory;
  if (tr.nodes() != K || sol.virtual_control.size() != 6 * (K - 1) ||
      sol.gamma.size() != 6 * (K - 1) || sol.virtual_buffer.size() != K) {
    throw std::invalid_argument("encode: solution does not match the layout");
  }
  tr.validate_shape();
  VecX z(layout.size());
  for (int k = 0; k < K; ++k) {
    z.segment<6>(layout.x(k)) = tr.states[static_cast<std::size_t>(k)].stacked();
  }
  for (int k = 0; k + 1 < K; ++k) {
    z.segment<3>(layout.u(k)) = tr.impulses[static_cast<std::size_t>(k)].dv;
    z[layout.sigma(k)] = tr.dilations[static_cast<std::size_t>(k)];
  }
  z.segment(layout.vc(0), 6 * (K - 1)) = sol.virtual_control;
  z.segment(layout.gamma(0), 6 * (K - 1)) = sol.gamma;
  z.segment(layout.vb(0), K) = sol.virtual_buffer;
  return z;
}

double subproblem_objective(const SubproblemSolution& sol,
                            const ReferenceTrajectory& scaled_ref,
                            const SubproblemWeights& weights)
{
  const auto& tr = sol.trajectory;
  double effort = 0.0;
  double deviation = 0.0;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    deviation += (tr.states[k].stacked() - scaled_ref.states[k].stacked()).squaredNorm();
  }
  for (std::size_t k = 0; k < tr.impulses.size(); ++k) {
    effort += tr.impulses[k].dv.squaredNorm();
    deviation += (tr.impulses[k].dv - scaled_ref.impulses[k].dv).squaredNorm();
    const double ds = tr.dilations[k] - scaled_ref.dilations[k];
    deviation += ds * ds;
  }
  return effort + weights.trust_region * deviation +
         weights.virtual_control * sol.virtual_control.lpNorm<1>() +
         weights.virtual_buffer * sol.virtual_buffer.sum();
}

// ----------------------------------------------------------------------------
// Keepout linearization
// ----------------------------------------------------------------------------

KeepoutHalfspace keepout_halfspace(const Vec3& ref_r, const ProblemSpec& spec)
{
  const Vec3 d = ref_r - spec.r_keepout;
  const double dist = d.norm();
  if (!(dist > kKeepoutSingularity)) {
    throw SingularLinearizationError(
        "keepout linearization is singular: reference position at the keepout center");
  }
  const Vec3 g = d / dist;
  KeepoutHalfspace hs;
  hs.normal << -g, -1.0;
  hs.offset = dist - g.dot(ref_r) - spec.rho_keepout;
  return hs;
}

// ----------------------------------------------------------------------------
// Assembly
// ----------------------------------------------------------------------------

pipg::ConicProgram assemble(const ReferenceTrajectory& scaled_ref,
                            const DiscreteSystem& scaled_sys,
                            const ProblemSpec& spec,
                            const ScalingFactors& scaling,
                            const SubproblemWeights& weights,
                            const VariableLayout& layout)
{
  using namespace pipg;

  scaled_ref.validate_shape();
  scaling.validate();
  weights.validate();
  const int K = layout.nodes();
  if (scaled_ref.nodes() != K || scaled_sys.intervals() != K - 1) {
    throw std::invalid_argument("assemble: reference, system and layout disagree on K");
  }
  if (!uniform(scaling.state.tail<3>()) || !uniform(scaling.control)) {
    throw std::invalid_argument(
        "assemble: velocity and control scaling must be uniform across axes");
  }

  const Index n = layout.size();
  const Index m = 6 * static_cast<Index>(K - 1);
  const double wtr = weights.trust_region;

  ConicProgram prog;

  // Cost.
  prog.quad_diag = VecX::Zero(n);
  prog.linear = VecX::Zero(n);
  prog.quad_diag.head(layout.state_block_size()).setConstant(2.0 * wtr);
  prog.quad_diag.segment(layout.u(0), layout.control_block_size()).setConstant(2.0 * (1.0 + wtr));
  prog.quad_diag.segment(layout.sigma(0), layout.dilation_block_size()).setConstant(2.0 * wtr);
  for (int k = 0; k < K; ++k) {
    const auto i = static_cast<std::size_t>(k);
    prog.linear.segment<6>(layout.x(k)) = -2.0 * wtr * scaled_ref.states[i].stacked();
    if (k + 1 < K) {
      prog.linear.segment<3>(layout.u(k)) = -2.0 * wtr * scaled_ref.impulses[i].dv;
      prog.linear[layout.sigma(k)] = -2.0 * wtr * scaled_ref.dilations[i];
      prog.linear.segment<6>(layout.gamma(k)).setConstant(weights.virtual_control);
    }
    prog.linear[layout.vb(k)] = weights.virtual_buffer;
  }

  // Dynamics: A_k x_k - x_{k+1} + B_k u_k + S_k sigma_k + nu^c_k = -c_k.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(K - 1) * (36 + 6 + 18 + 6 + 6));
  prog.eq_offset = VecX(m);
  for (int k = 0; k + 1 < K; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const Index row = 6 * static_cast<Index>(k);
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        const double val = scaled_sys.A[i](a, b);
        if (val != 0.0) {
          trip.emplace_back(row + a, layout.x(k) + b, val);
        }
      }
      trip.emplace_back(row + a, layout.x(k + 1) + a, -1.0);
      for (int b = 0; b < 3; ++b) {
        const double val = scaled_sys.B[i](a, b);
        if (val != 0.0) {
          trip.emplace_back(row + a, layout.u(k) + b, val);
        }
      }
      if (scaled_sys.S[i][a] != 0.0) {
        trip.emplace_back(row + a, layout.sigma(k), scaled_sys.S[i][a]);
      }
      trip.emplace_back(row + a, layout.vc(k) + a, 1.0);
    }
    prog.eq_offset.segment<6>(row) = -scaled_sys.c[i];
  }
  prog.eq_matrix.resize(m, n);
  prog.eq_matrix.setFromTriplets(trip.begin(), trip.end());
  prog.eq_matrix.makeCompressed();

  // Projection sets.
  const Vec3 pos_scale = scaling.state.head<3>();
  const double vel_scale = scaling.state[3];
  const double buf_scale = scaling.buffer;
  auto& sets = prog.sets;

  const Vec6 x_init = (Vec6() << spec.r_init, spec.v_init).finished().cwiseQuotient(scaling.state);
  sets.push_back(ProjectableSet::over_range(Singleton{x_init.head<3>()}, layout.r(0)));
  sets.push_back(ProjectableSet::over_range(Singleton{x_init.tail<3>()}, layout.v(0)));
  sets.push_back(ProjectableSet::over_range(Box{VecX::Zero(1), VecX::Constant(1, kInf)}, layout.vb(0)));

  for (int k = 1; k + 1 < K; ++k) {
    const Vec3 rbar = scaled_ref.states[static_cast<std::size_t>(k)].r.cwiseProduct(pos_scale);
    const auto hs = keepout_halfspace(rbar, spec);
    VecX normal(4);
    normal << hs.normal.head<3>().cwiseProduct(pos_scale) / buf_scale, hs.normal[3];
    VecX nonneg = VecX::Zero(4);
    nonneg[3] = -1.0;
    sets.push_back(ProjectableSet::over_indices(
        TwoHalfspaces{normal, hs.offset / buf_scale, nonneg, 0.0},
        {layout.r(k), layout.r(k) + 1, layout.r(k) + 2, layout.vb(k)}));
    sets.push_back(ProjectableSet::over_range(Ball{VecX::Zero(3), spec.v_max / vel_scale}, layout.v(k)));
  }

  sets.push_back(ProjectableSet::over_range(Singleton{VecX::Zero(3)}, layout.r(K - 1)));
  sets.push_back(ProjectableSet::over_range(Singleton{VecX::Zero(3)}, layout.v(K - 1)));
  sets.push_back(ProjectableSet::over_range(Box{VecX::Zero(1), VecX::Constant(1, kInf)}, layout.vb(K - 1)));

  const double u_radius = spec.u_max / scaling.control[0];
  const double s_lo = spec.sigma_min / scaling.dilation;
  const double s_hi = spec.sigma_max / scaling.dilation;
  VecX upper_face(2);
  upper_face << 1.0, -1.0;
  VecX lower_face(2);
  lower_face << -1.0, -1.0;
  for (int k = 0; k + 1 < K; ++k) {
    sets.push_back(ProjectableSet::over_range(Ball{VecX::Zero(3), u_radius}, layout.u(k)));
    sets.push_back(ProjectableSet::over_range(Box{VecX::Constant(1, s_lo), VecX::Constant(1, s_hi)},
                                              layout.sigma(k)));
    for (int j = 0; j < 6; ++j) {
      // -Gamma <= nu^c <= Gamma
      sets.push_back(ProjectableSet::over_indices(TwoHalfspaces{upper_face, 0.0, lower_face, 0.0},
                                                  {layout.vc(k) + j, layout.gamma(k) + j}));
    }
  }

  return prog;
}

}  // namespace pipgscp

#include "pipgscp/discretize.hpp"

#include <stdexcept>

namespace pipgscp {

namespace {

// Flattened augmented state: xbar (6) | Psi_A (36, column-major) | Psi_S (6) | Psi_c (6).
constexpr int kAugDim = 6 + 36 + 6 + 6;
using AugVec = Eigen::Matrix<double, kAugDim, 1>;

struct AugView
{
  Eigen::Map<const Vec6> x;
  Eigen::Map<const Mat6> psi_a;
  Eigen::Map<const Vec6> psi_s;
  Eigen::Map<const Vec6> psi_c;

  explicit AugView(const AugVec& y)
      : x(y.data()), psi_a(y.data() + 6), psi_s(y.data() + 42), psi_c(y.data() + 48)
  {}
};

AugVec augmented_rhs(const CwParams& params, double sigma_bar, const AugVec& y)
{
  const AugView in(y);
  // A(tau) = sigma_bar df/dx at xbar(tau); constant for CW, evaluated per call
  // so the structure matches the general linearization.
  const Mat6 A = sigma_bar * cw_jacobian(params);
  const Vec6 f = cw_deriv(params, in.x);
  const Vec6 c = -A * in.x;

  AugVec dy;
  Eigen::Map<Vec6>(dy.data()) = sigma_bar * f;
  Eigen::Map<Mat6>(dy.data() + 6) = A * in.psi_a;
  Eigen::Map<Vec6>(dy.data() + 42) = A * in.psi_s + f;
  Eigen::Map<Vec6>(dy.data() + 48) = A * in.psi_c + c;
  return dy;
}

}  // namespace

IntervalMatrices discretize_interval(const State& node_state, const Impulse& impulse,
                                     double sigma_bar, double tau0, double tau1,
                                     const CwParams& params, int substeps)
{
  if (!(sigma_bar > 0.0)) {
    throw std::invalid_argument("discretize_interval: sigma_bar must be positive");
  }
  if (!(tau1 > tau0)) {
    throw std::invalid_argument("discretize_interval: reversed or empty tau span");
  }
  if (substeps < 1) {
    throw std::invalid_argument("discretize_interval: substeps must be at least 1");
  }

  AugVec y = AugVec::Zero();
  Eigen::Map<Vec6>(y.data()) = apply_impulse(node_state, impulse).stacked();
  Eigen::Map<Mat6>(y.data() + 6).setIdentity();

  const double h = (tau1 - tau0) / substeps;
  for (int i = 0; i < substeps; ++i) {
    const AugVec k1 = augmented_rhs(params, sigma_bar, y);
    const AugVec k2 = augmented_rhs(params, sigma_bar, y + 0.5 * h * k1);
    const AugVec k3 = augmented_rhs(params, sigma_bar, y + 0.5 * h * k2);
    const AugVec k4 = augmented_rhs(params, sigma_bar, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  const AugView out(y);
  return {out.psi_a, out.psi_s, out.psi_c};
}

Mat63 extract_B(const Mat6& A)
{
  return A.rightCols<3>();
}

DiscreteSystem discretize_all(const ReferenceTrajectory& ref, const TimeGrid& grid,
                              const CwParams& params, int substeps)
{
  ref.validate_shape();
  grid.validate();
  if (grid.nodes() != ref.nodes()) {
    throw std::invalid_argument("discretize_all: grid and reference node counts differ");
  }
  const int n = grid.intervals();
  DiscreteSystem sys;
  sys.A.resize(static_cast<std::size_t>(n));
  sys.B.resize(static_cast<std::size_t>(n));
  sys.S.resize(static_cast<std::size_t>(n));
  sys.c.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const auto m = discretize_interval(ref.states[i], ref.impulses[i], ref.dilations[i],
                                       grid.taus[i], grid.taus[i + 1], params, substeps);
    sys.A[i] = m.A;
    sys.B[i] = extract_B(m.A);
    sys.S[i] = m.S;
    sys.c[i] = m.c;
  }
  return sys;
}

}  // namespace pipgscp

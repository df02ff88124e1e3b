#include "pipgscp/dynamics.hpp"

#include <stdexcept>
#include <string>

namespace pipgscp {

void CwParams::validate() const
{
  if (!(mean_motion > 0.0)) {
    throw std::invalid_argument("CwParams: mean_motion must be positive");
  }
}

Vec6 State::stacked() const
{
  Vec6 x;
  x << r, v;
  return x;
}

State State::from(const Vec6& x)
{
  return {x.head<3>(), x.tail<3>()};
}

Vec6 cw_deriv(const CwParams& params, const Vec6& x)
{
  const double n = params.mean_motion;
  Vec6 dx;
  dx << x[3], x[4], x[5],
      3.0 * n * n * x[0] + 2.0 * n * x[4],
      -2.0 * n * x[3],
      -n * n * x[2];
  return dx;
}

Mat6 cw_jacobian(const CwParams& params)
{
  const double n = params.mean_motion;
  Mat6 J = Mat6::Zero();
  J.topRightCorner<3, 3>().setIdentity();
  J(3, 0) = 3.0 * n * n;
  J(3, 4) = 2.0 * n;
  J(4, 3) = -2.0 * n;
  J(5, 2) = -n * n;
  return J;
}

Mat63 cw_control_jacobian()
{
  Mat63 B = Mat63::Zero();
  B.bottomRows<3>().setIdentity();
  return B;
}

State apply_impulse(const State& state, const Impulse& impulse)
{
  return {state.r, state.v + impulse.dv};
}

Vec6 apply_impulse(const Vec6& x, const Vec3& dv)
{
  Vec6 out = x;
  out.tail<3>() += dv;
  return out;
}

Vec6 propagate_cw(const CwParams& params, const Vec6& x0, double duration, int substeps,
                  std::vector<std::pair<double, Vec6>>* samples)
{
  if (substeps < 1) {
    throw std::invalid_argument("propagate_cw: substeps must be at least 1");
  }
  const double h = duration / substeps;
  Vec6 x = x0;
  for (int i = 0; i < substeps; ++i) {
    const Vec6 k1 = cw_deriv(params, x);
    const Vec6 k2 = cw_deriv(params, x + 0.5 * h * k1);
    const Vec6 k3 = cw_deriv(params, x + 0.5 * h * k2);
    const Vec6 k4 = cw_deriv(params, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (samples) {
      samples->emplace_back(h * (i + 1), x);
    }
  }
  return x;
}

void DilationProfile::validate(double sigma_min, double sigma_max) const
{
  grid.validate();
  if (static_cast<int>(sigmas.size()) != grid.intervals()) {
    throw std::invalid_argument("DilationProfile: need one dilation factor per interval");
  }
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    if (sigmas[k] < sigma_min || sigmas[k] > sigma_max) {
      throw std::invalid_argument("DilationProfile: sigma[" + std::to_string(k) +
                                  "] outside [sigma_min, sigma_max]");
    }
  }
}

std::vector<double> interval_durations(const DilationProfile& profile)
{
  std::vector<double> out(profile.sigmas.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = profile.sigmas[k] * profile.grid.width(static_cast<int>(k));
  }
  return out;
}

double time_of_flight(const DilationProfile& profile)
{
  double tf = 0.0;
  for (double d : interval_durations(profile)) {
    tf += d;
  }
  return tf;
}

TimeGrid TimeGrid::uniform(int nodes)
{
  if (nodes < 2) {
    throw std::invalid_argument("TimeGrid: need at least two nodes");
  }
  TimeGrid g;
  g.taus.resize(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) {
    g.taus[static_cast<std::size_t>(k)] = static_cast<double>(k) / (nodes - 1);
  }
  g.taus.back() = 1.0;
  return g;
}

TimeGrid TimeGrid::unit_intervals(int nodes)
{
  if (nodes < 2) {
    throw std::invalid_argument("TimeGrid: need at least two nodes");
  }
  TimeGrid g;
  g.taus.resize(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) {
    g.taus[static_cast<std::size_t>(k)] = static_cast<double>(k);
  }
  return g;
}

void TimeGrid::validate() const
{
  if (taus.size() < 2 || taus.front() != 0.0) {
    throw std::invalid_argument("TimeGrid: need at least two nodes starting at exactly 0");
  }
  for (std::size_t k = 1; k < taus.size(); ++k) {
    if (!(taus[k] > taus[k - 1])) {
      throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
    }
  }
}

}  // namespace pipgscp

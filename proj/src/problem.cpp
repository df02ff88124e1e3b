#include "pipgscp/problem.hpp"

#include <stdexcept>

namespace pipgscp {

void ProblemSpec::validate() const
{
  cw.validate();
  if (!r_init.allFinite() || !v_init.allFinite() || !r_keepout.allFinite()) {
    throw std::invalid_argument("ProblemSpec: non-finite boundary or keepout data");
  }
  if (!(v_max > 0.0)) {
    throw std::invalid_argument("ProblemSpec: v_max must be positive");
  }
  if (!(u_max > 0.0)) {
    throw std::invalid_argument("ProblemSpec: u_max must be positive");
  }
  if (!(rho_keepout > 0.0)) {
    throw std::invalid_argument("ProblemSpec: rho_keepout must be positive");
  }
  if (!(sigma_min > 0.0) || !(sigma_min < sigma_max)) {
    throw std::invalid_argument("ProblemSpec: need 0 < sigma_min < sigma_max");
  }
  if (!((r_init - r_keepout).norm() > rho_keepout)) {
    throw std::invalid_argument("ProblemSpec: initial position lies inside the keepout zone");
  }
  if (!(r_keepout.norm() > rho_keepout)) {
    throw std::invalid_argument("ProblemSpec: terminal position lies inside the keepout zone");
  }
  if (v_init.norm() > v_max) {
    throw std::invalid_argument("ProblemSpec: initial speed exceeds v_max");
  }
}

void ReferenceTrajectory::validate_shape() const
{
  const auto k = states.size();
  if (k < 2 || impulses.size() + 1 != k || dilations.size() + 1 != k) {
    throw std::invalid_argument(
        "ReferenceTrajectory: need K states, K-1 impulses and K-1 dilations");
  }
}

}  // namespace pipgscp

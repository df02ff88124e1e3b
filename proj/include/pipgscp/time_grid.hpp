#pragma once

#include <vector>

namespace pipgscp {

/// Dilated-time nodes 0 = tau_1 < ... < tau_K.
///
/// `uniform` spans [0, 1], so t_f is the average dilation factor.
/// `unit_intervals` gives every interval unit length, so sigma_k is the
/// wall-clock duration of interval k and t_f is the sum of the factors.
struct TimeGrid
{
  std::vector<double> taus;

  static TimeGrid uniform(int nodes);
  static TimeGrid unit_intervals(int nodes);

  int nodes() const { return static_cast<int>(taus.size()); }
  int intervals() const { return nodes() - 1; }
  double width(int k) const { return taus[static_cast<std::size_t>(k) + 1] - taus[static_cast<std::size_t>(k)]; }

  /// Throws std::invalid_argument unless strictly increasing from exactly 0.
  void validate() const;
};

}  // namespace pipgscp

#pragma once

#include <cmath>
#include <random>
#include <variant>

#include "pipgscp/projection.hpp"

namespace random_sets {

using namespace pipgscp;
using namespace pipgscp::pipg;

/// Random instances of every set kind (0 ball, 1 box, 2 singleton,
/// 3 halfspace, 4 two halfspaces, 5 zero).
struct RandomSets
{
  std::mt19937_64 gen{2024};
  std::uniform_real_distribution<double> u{-1.0, 1.0};

  VecX vec(Index n, double scale = 1.0)
  {
    VecX x(n);
    for (Index i = 0; i < n; ++i) {
      x[i] = scale * u(gen);
    }
    return x;
  }

  SetShape shape(int kind)
  {
    const Index n = 1 + static_cast<Index>(gen() % 4);
    switch (kind) {
      case 0:
        return Ball{vec(n), 0.1 + std::abs(u(gen))};
      case 1: {
        const VecX a = vec(n);
        const VecX b = vec(n);
        return Box{a.cwiseMin(b), a.cwiseMax(b)};
      }
      case 2:
        return Singleton{vec(n)};
      case 3:
        return Halfspace{vec(n) + VecX::Constant(n, 0.05), u(gen)};
      case 4: {
        const Index m = 2 + static_cast<Index>(gen() % 3);
        return TwoHalfspaces{vec(m) + VecX::Constant(m, 0.05), u(gen), vec(m) - VecX::Constant(m, 0.05),
                             u(gen)};
      }
      default:
        return Zero{n};
    }
  }

  /// A feasible point built without calling project().
  bool feasible_point(const SetShape& s, VecX& p)
  {
    const Index n = dimension(s);
    for (int attempt = 0; attempt < 200; ++attempt) {
      if (const auto* b = std::get_if<Ball>(&s)) {
        VecX d = vec(n);
        if (d.norm() > 1.0) {
          continue;
        }
        p = b->center + b->radius * d;
        return true;
      }
      if (const auto* b = std::get_if<Box>(&s)) {
        p = b->lower + (b->upper - b->lower).cwiseProduct((vec(n).array() + 1.0).matrix() / 2.0);
        return true;
      }
      if (const auto* b = std::get_if<Singleton>(&s)) {
        p = b->value;
        return true;
      }
      if (std::holds_alternative<Zero>(s)) {
        p = VecX::Zero(n);
        return true;
      }
      p = vec(n, 5.0);
      if (violation(s, p) == 0.0) {
        return true;
      }
    }
    return false;
  }
};

}  // namespace random_sets

using random_sets::RandomSets;

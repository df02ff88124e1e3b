#include "pipgscp/projection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pipgscp::pipg {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(Index expected, Index got, const char* what)
{
  if (expected != got) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                std::to_string(expected) + ", got " +
                                std::to_string(got) + ")");
  }
}

// Projection onto a single halfspace a'y <= b, written into out.
void halfspace_into(const VecX& a, double b, const Eigen::Ref<const VecX>& y,
                    Eigen::Ref<VecX> out)
{
  const double excess = a.dot(y) - b;
  if (excess <= 0.0) {
    out = y;
  } else {
    out = y - (excess / a.squaredNorm()) * a;
  }
}

void two_halfspaces_into(const TwoHalfspaces& s, const Eigen::Ref<const VecX>& y,
                         Eigen::Ref<VecX> out)
{
  const double e1 = s.normal1.dot(y) - s.offset1;
  const double e2 = s.normal2.dot(y) - s.offset2;
  // Excess below the rounding error of the dot product counts as feasible;
  // otherwise a point already on both faces would be moved again by the
  // Gram solve, which amplifies rounding when the normals are nearly parallel.
  constexpr double kRound = 64.0 * std::numeric_limits<double>::epsilon();
  const double tol1 = kRound * (std::abs(s.offset1) + s.normal1.cwiseAbs().dot(y.cwiseAbs()));
  const double tol2 = kRound * (std::abs(s.offset2) + s.normal2.cwiseAbs().dot(y.cwiseAbs()));
  if (e1 <= tol1 && e2 <= tol2) {
    out = y;
    return;
  }

  const double n11 = s.normal1.squaredNorm();
  const double n22 = s.normal2.squaredNorm();
  const double n12 = s.normal1.dot(s.normal2);

  // Single-face candidates. Moving along normal1 by t changes the second
  // constraint by t * n12, so feasibility of each candidate is scalar algebra.
  bool have = false;
  double best_dist = std::numeric_limits<double>::infinity();
  double best_t1 = 0.0;
  double best_t2 = 0.0;
  if (e1 > 0.0) {
    const double t = e1 / n11;
    if (e2 - t * n12 <= 0.0) {
      have = true;
      best_dist = t * t * n11;
      best_t1 = t;
    }
  }
  if (e2 > 0.0) {
    const double t = e2 / n22;
    if (e1 - t * n12 <= 0.0 && t * t * n22 < best_dist) {
      have = true;
      best_dist = t * t * n22;
      best_t1 = 0.0;
      best_t2 = t;
    }
  }

  if (!have) {
    // Both faces active: y - [a1 a2] (G^-1 (N'y - b)) with G the Gram matrix.
    const double det = n11 * n22 - n12 * n12;
    if (det <= 1e-14 * n11 * n22) {
      // Parallel normals. Unreachable for the rendezvous sets; project onto
      // the first halfspace then the second.
      VecX tmp(y.size());
      halfspace_into(s.normal1, s.offset1, y, tmp);
      halfspace_into(s.normal2, s.offset2, tmp, out);
      return;
    }
    const auto solve = [&](double r1, double r2, double& t1, double& t2) {
      t1 = (n22 * r1 - n12 * r2) / det;
      t2 = (n11 * r2 - n12 * r1) / det;
    };
    solve(e1, e2, best_t1, best_t2);
    out = y - best_t1 * s.normal1 - best_t2 * s.normal2;
    // One step of iterative refinement: the Gram system loses digits when the
    // faces are nearly parallel, and the leftover residual would otherwise be
    // amplified again by a second projection.
    double d1 = 0.0;
    double d2 = 0.0;
    solve(s.normal1.dot(out) - s.offset1, s.normal2.dot(out) - s.offset2, d1, d2);
    out -= d1 * s.normal1 + d2 * s.normal2;
    return;
  }
  out = y - best_t1 * s.normal1 - best_t2 * s.normal2;
}

}  // namespace

ProjectableSet ProjectableSet::over_range(SetShape shape, Index start)
{
  const Index n = dimension(shape);
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    idx[static_cast<std::size_t>(i)] = start + i;
  }
  return ProjectableSet{std::move(shape), std::move(idx)};
}

ProjectableSet ProjectableSet::over_indices(SetShape shape, std::vector<Index> indices)
{
  require_dim(dimension(shape), static_cast<Index>(indices.size()), "ProjectableSet");
  return ProjectableSet{std::move(shape), std::move(indices)};
}

Index dimension(const SetShape& shape)
{
  return std::visit(overloaded{
                        [](const Ball& b) { return b.center.size(); },
                        [](const Box& b) { return b.lower.size(); },
                        [](const Singleton& s) { return s.value.size(); },
                        [](const Halfspace& h) { return h.normal.size(); },
                        [](const TwoHalfspaces& h) { return h.normal1.size(); },
                        [](const Zero& z) { return z.dim; },
                    },
                    shape);
}

void validate(const SetShape& shape)
{
  std::visit(overloaded{
                 [](const Ball& b) {
                   if (!(b.radius > 0.0)) {
                     throw std::invalid_argument("Ball: radius must be positive");
                   }
                 },
                 [](const Box& b) {
                   require_dim(b.lower.size(), b.upper.size(), "Box");
                   if ((b.lower.array() > b.upper.array()).any()) {
                     throw std::invalid_argument("Box: lower bound exceeds upper bound");
                   }
                 },
                 [](const Singleton&) {},
                 [](const Halfspace& h) {
                   if (h.normal.squaredNorm() == 0.0) {
                     throw std::invalid_argument("Halfspace: zero normal");
                   }
                 },
                 [](const TwoHalfspaces& h) {
                   require_dim(h.normal1.size(), h.normal2.size(), "TwoHalfspaces");
                   if (h.normal1.squaredNorm() == 0.0 || h.normal2.squaredNorm() == 0.0) {
                     throw std::invalid_argument("TwoHalfspaces: zero normal");
                   }
                 },
                 [](const Zero& z) {
                   if (z.dim < 0) {
                     throw std::invalid_argument("Zero: negative dimension");
                   }
                 },
             },
             shape);
}

void project_into(const SetShape& shape, const Eigen::Ref<const VecX>& y,
                  Eigen::Ref<VecX> out)
{
  std::visit(overloaded{
                 [&](const Ball& b) {
                   const double dist = (y - b.center).norm();
                   if (dist <= b.radius) {
                     out = y;
                   } else {
                     out = b.center + (b.radius / dist) * (y - b.center);
                   }
                 },
                 [&](const Box& b) { out = y.cwiseMax(b.lower).cwiseMin(b.upper); },
                 [&](const Singleton& s) { out = s.value; },
                 [&](const Halfspace& h) { halfspace_into(h.normal, h.offset, y, out); },
                 [&](const TwoHalfspaces& h) { two_halfspaces_into(h, y, out); },
                 [&](const Zero&) { out.setZero(); },
             },
             shape);
}

VecX project(const SetShape& shape, const VecX& y)
{
  require_dim(dimension(shape), y.size(), "project");
  VecX out(y.size());
  project_into(shape, y, out);
  return out;
}

double violation(const SetShape& shape, const VecX& y)
{
  require_dim(dimension(shape), y.size(), "violation");
  return std::visit(
      overloaded{
          [&](const Ball& b) { return std::max(0.0, (y - b.center).norm() - b.radius); },
          [&](const Box& b) {
            const double lo = (b.lower - y).maxCoeff();
            const double hi = (y - b.upper).maxCoeff();
            return std::max({0.0, lo, hi});
          },
          [&](const Singleton& s) { return (y - s.value).lpNorm<Eigen::Infinity>(); },
          [&](const Halfspace& h) { return std::max(0.0, h.normal.dot(y) - h.offset); },
          [&](const TwoHalfspaces& h) {
            return std::max({0.0, h.normal1.dot(y) - h.offset1, h.normal2.dot(y) - h.offset2});
          },
          [&](const Zero&) { return y.size() == 0 ? 0.0 : y.lpNorm<Eigen::Infinity>(); },
      },
      shape);
}

}  // namespace pipgscp::pipg

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pipgscp/projection.hpp"
#include "random_sets.hpp"
#include "test_util.hpp"

using namespace pipgscp;
using namespace pipgscp::pipg;

namespace {

VecX v(std::initializer_list<double> xs)
{
  VecX out(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) {
    out[i++] = x;
  }
  return out;
}

}  // namespace

TEST_CASE("ball projection scales exterior points onto the sphere")
{
  CHECK(approx_equal(project(Ball{VecX::Zero(3), 1.0}, v({2, 0, 0})), v({1, 0, 0}), 1e-15));
  CHECK(approx_equal(project(Ball{v({1, 1, 1}), 2.0}, v({1, 1, 5})), v({1, 1, 3}), 1e-15));
}

TEST_CASE("ball projection leaves interior points alone")
{
  CHECK(project(Ball{VecX::Zero(3), 1.0}, v({0.3, 0.4, 0})) == v({0.3, 0.4, 0}));
}

TEST_CASE("box projection clamps")
{
  CHECK(project(Box{v({0}), v({1})}, v({-3})) == v({0}));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(project(Box{v({0, -inf}), v({inf, 2})}, v({-1, 7})) == v({0, 2}));
}

TEST_CASE("singleton, zero and halfspace projections")
{
  CHECK(project(Singleton{v({4, 5})}, v({-1, 2})) == v({4, 5}));
  CHECK(project(Zero{3}, v({1, 2, 3})) == VecX::Zero(3));
  // {y1 + y2 <= 0}
  CHECK(approx_equal(project(Halfspace{v({1, 1}), 0.0}, v({1, 1})), v({0, 0}), 1e-15));
  CHECK(project(Halfspace{v({1, 1}), 0.0}, v({-1, 0})) == v({-1, 0}));
}

TEST_CASE("two halfspaces: corner case matches the line-search oracle")
{
  const TwoHalfspaces s{v({1, 0}), 0.0, v({0, 1}), 0.0};
  const VecX p = project(s, v({1, 1}));
  const Eigen::Vector2d g = oracle::project_two_halfspaces_lines({1, 1}, {1, 0}, 0, {0, 1}, 0, 4.0);
  CHECK(approx_equal(p, g, 1e-6));
  // frozen from the oracle
  CHECK(approx_equal(p, v({0, 0}), 1e-15));
}

TEST_CASE("two halfspaces: random 2-D instances match the line-search oracle")
{
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const Eigen::Vector2d a1(u(gen), u(gen));
    const Eigen::Vector2d a2(u(gen), u(gen));
    if (a1.norm() < 0.1 || a2.norm() < 0.1 ||
        std::abs(a1.normalized().dot(a2.normalized())) > 0.99) {
      continue;
    }
    const double b1 = u(gen);
    const double b2 = u(gen);
    const Eigen::Vector2d y(2 * u(gen), 2 * u(gen));
    const Eigen::Vector2d g = oracle::project_two_halfspaces_lines(y, a1, b1, a2, b2, 50.0);
    if (!g.allFinite()) {
      continue;
    }
    const VecX p = project(TwoHalfspaces{a1, b1, a2, b2}, VecX(y));
    CHECK((p - VecX(g)).norm() < 1e-6);
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("two halfspaces: parallel normals fall back to the binding face")
{
  // y1 <= 1 and 2 y1 <= 1  ->  y1 <= 0.5
  const VecX p = project(TwoHalfspaces{v({1, 0}), 1.0, v({2, 0}), 1.0}, v({3, 4}));
  CHECK(approx_equal(p, v({0.5, 4}), 1e-14));
}

TEST_CASE("dimension mismatches and invalid shapes throw")
{
  CHECK_THROWS_AS(project(Ball{VecX::Zero(3), 1.0}, VecX::Zero(2)), std::invalid_argument);
  CHECK_THROWS_AS(validate(Ball{VecX::Zero(3), 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(Box{v({1}), v({0})}), std::invalid_argument);
  CHECK_THROWS_AS(validate(Halfspace{v({0, 0}), 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(TwoHalfspaces{v({1, 0}), 0.0, v({0}), 0.0}), std::invalid_argument);
}

TEST_CASE("violation is zero inside and positive outside")
{
  CHECK(violation(Ball{VecX::Zero(2), 1.0}, v({0.5, 0})) == 0.0);
  CHECK(violation(Ball{VecX::Zero(2), 1.0}, v({3, 0})) == doctest::Approx(2.0));
  CHECK(violation(Box{v({0}), v({1})}, v({1.5})) == doctest::Approx(0.5));
}

// ---------------------------------------------------------------------------
// Properties over 10^4 random cases per set kind
// ---------------------------------------------------------------------------

constexpr int kCases = 10000;

TEST_CASE("property: projection is idempotent for every set kind")
{
  RandomSets r;
  for (int kind = 0; kind < 6; ++kind) {
    double worst = 0.0;
    for (int t = 0; t < kCases; ++t) {
      const SetShape s = r.shape(kind);
      const VecX p = project(s, r.vec(dimension(s), 3.0));
      worst = std::max(worst, (project(s, p) - p).lpNorm<Eigen::Infinity>());
    }
    CAPTURE(kind);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("property: the projection is no farther than any feasible point")
{
  RandomSets r;
  for (int kind = 0; kind < 6; ++kind) {
    int tested = 0;
    double worst = -1.0;
    for (int t = 0; t < kCases; ++t) {
      const SetShape s = r.shape(kind);
      const VecX y = r.vec(dimension(s), 3.0);
      VecX p;
      if (!r.feasible_point(s, p)) {
        continue;
      }
      ++tested;
      const VecX proj = project(s, y);
      CHECK(violation(s, proj) <= 1e-12);
      worst = std::max(worst, (y - proj).norm() - (y - p).norm());
    }
    CAPTURE(kind);
    CHECK(tested > kCases / 2);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("property: projection is nonexpansive")
{
  RandomSets r;
  for (int kind = 0; kind < 6; ++kind) {
    double worst = -1.0;
    for (int t = 0; t < kCases; ++t) {
      const SetShape s = r.shape(kind);
      const VecX y1 = r.vec(dimension(s), 3.0);
      const VecX y2 = r.vec(dimension(s), 3.0);
      worst = std::max(worst, (project(s, y1) - project(s, y2)).norm() - (y1 - y2).norm());
    }
    CAPTURE(kind);
    CHECK(worst <= 1e-12);
  }
}

#pragma once

// Independent reference implementations used only by the tests. None of
// them call into the library's numerical code paths.

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// exp(M) by scaling and squaring with a degree-24 Taylor polynomial.
inline MatrixXd expm(const MatrixXd& m)
{
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  }
  const MatrixXd a = m / std::ldexp(1.0, squarings);
  MatrixXd term = MatrixXd::Identity(m.rows(), m.cols());
  MatrixXd sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) {
    sum = sum * sum;
  }
  return sum;
}

/// Closed-form Clohessy-Wiltshire state transition matrix over t seconds
/// (x radial, y along-track, z normal).
inline Eigen::Matrix<double, 6, 6> cw_stm(double n, double t)
{
  const double s = std::sin(n * t);
  const double c = std::cos(n * t);
  Eigen::Matrix<double, 6, 6> p;
  // clang-format off
  p << 4 - 3 * c,       0, 0,      s / n,              2 * (1 - c) / n,           0,
       6 * (s - n * t), 1, 0,      -2 * (1 - c) / n,   (4 * s - 3 * n * t) / n,   0,
       0,               0, c,      0,                  0,                         s / n,
       3 * n * s,       0, 0,      c,                  2 * s,                     0,
       -6 * n * (1 - c),0, 0,      -2 * s,             4 * c - 3,                 0,
       0,               0, -n * s, 0,                  0,                         c;
  // clang-format on
  return p;
}

/// CW Jacobian written out from the equations of motion.
inline Eigen::Matrix<double, 6, 6> cw_matrix(double n)
{
  Eigen::Matrix<double, 6, 6> a = Eigen::Matrix<double, 6, 6>::Zero();
  a.topRightCorner<3, 3>().setIdentity();
  a(3, 0) = 3 * n * n;
  a(3, 4) = 2 * n;
  a(4, 3) = -2 * n;
  a(5, 2) = -n * n;
  return a;
}

/// Composite Simpson rule of a vector-valued integrand on [0, T].
template <typename F>
VectorXd simpson(const F& f, double t_end, int panels)
{
  if (panels % 2 != 0) {
    ++panels;
  }
  const double h = t_end / panels;
  VectorXd acc = f(0.0) + f(t_end);
  for (int i = 1; i < panels; ++i) {
    acc += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
  }
  return acc * (h / 3.0);
}

/// Largest eigenvalue of H'H from a dense symmetric eigensolve.
inline double max_eig_gram(const MatrixXd& h)
{
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h.transpose() * h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// Strongly convex QP with box and equality constraints:
///   min 1/2 z'Pz + q'z  s.t.  Hz = h, lo <= z <= hi,  P diagonal > 0.
struct BoxQp
{
  VectorXd p;
  VectorXd q;
  MatrixXd h_mat;
  VectorXd h;
  VectorXd lo;
  VectorXd hi;
};

/// Random instance whose feasible set is nonempty: h = H z0 for an interior
/// point z0 of the box.
inline BoxQp random_box_qp(std::mt19937_64& gen, int n, int m)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.5, 2.0);
  BoxQp qp;
  qp.p.resize(n);
  qp.q.resize(n);
  qp.lo.resize(n);
  qp.hi.resize(n);
  VectorXd z0(n);
  for (int i = 0; i < n; ++i) {
    qp.p[i] = pos(gen);
    qp.q[i] = 3.0 * u(gen);
    qp.lo[i] = -pos(gen);
    qp.hi[i] = pos(gen);
    z0[i] = qp.lo[i] + (0.25 + 0.5 * (0.5 * (u(gen) + 1.0))) * (qp.hi[i] - qp.lo[i]);
  }
  qp.h_mat.resize(m, n);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) {
      qp.h_mat(r, c) = u(gen);
    }
  }
  qp.h = qp.h_mat * z0;
  return qp;
}

/// Exact solution by enumerating which bounds are active: every coordinate is
/// free, at its lower bound or at its upper bound. For each pattern the
/// equality-constrained KKT system is solved; the feasible candidate with the
/// smallest objective is the unique minimizer.
inline VectorXd solve_box_qp(const BoxQp& qp)
{
  const int n = static_cast<int>(qp.p.size());
  const int m = static_cast<int>(qp.h.size());
  std::vector<int> state(n, 0);
  double best = std::numeric_limits<double>::infinity();
  VectorXd best_z;

  long long combos = 1;
  for (int i = 0; i < n; ++i) {
    combos *= 3;
  }
  for (long long code = 0; code < combos; ++code) {
    long long c = code;
    std::vector<int> free_idx;
    VectorXd fixed = VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      state[i] = static_cast<int>(c % 3);
      c /= 3;
      if (state[i] == 0) {
        free_idx.push_back(i);
      } else {
        fixed[i] = state[i] == 1 ? qp.lo[i] : qp.hi[i];
      }
    }
    const int nf = static_cast<int>(free_idx.size());
    // KKT on free coordinates: [P_f H_f'; H_f 0] [z_f; y] = [-q_f; h - H_x fixed]
    MatrixXd kkt = MatrixXd::Zero(nf + m, nf + m);
    VectorXd rhs(nf + m);
    const VectorXd h_rem = qp.h - qp.h_mat * fixed;
    for (int a = 0; a < nf; ++a) {
      kkt(a, a) = qp.p[free_idx[a]];
      rhs[a] = -qp.q[free_idx[a]];
      for (int r = 0; r < m; ++r) {
        kkt(a, nf + r) = qp.h_mat(r, free_idx[a]);
        kkt(nf + r, a) = qp.h_mat(r, free_idx[a]);
      }
    }
    rhs.tail(m) = h_rem;
    Eigen::FullPivLU<MatrixXd> lu(kkt);
    if (lu.rank() < nf + m) {
      continue;
    }
    const VectorXd sol = lu.solve(rhs);
    VectorXd z = fixed;
    bool ok = true;
    for (int a = 0; a < nf; ++a) {
      const int i = free_idx[a];
      z[i] = sol[a];
      if (z[i] < qp.lo[i] - 1e-12 || z[i] > qp.hi[i] + 1e-12) {
        ok = false;
      }
    }
    if (!ok || (qp.h_mat * z - qp.h).lpNorm<Eigen::Infinity>() > 1e-9) {
      continue;
    }
    const double obj = 0.5 * z.dot(qp.p.asDiagonal() * z) + qp.q.dot(z);
    if (obj < best) {
      best = obj;
      best_z = z;
    }
  }
  return best_z;
}

/// Projection onto {y : a1'y <= b1, a2'y <= b2} in 2-D. An infeasible y
/// projects onto one of the two boundary lines. Along line i, parametrized by
/// arc length from the foot of y, the distance to y grows with |t| and the
/// feasible t form an interval, so the nearest feasible t is found by a grid
/// scan over [-window, window] followed by bisection toward t = 0.
/// Returns NaN when neither line has a feasible point in the window.
inline Eigen::Vector2d project_two_halfspaces_lines(const Eigen::Vector2d& y,
                                                    const Eigen::Vector2d& a1, double b1,
                                                    const Eigen::Vector2d& a2, double b2,
                                                    double window)
{
  if (a1.dot(y) <= b1 && a2.dot(y) <= b2) {
    return y;
  }
  const Eigen::Vector2d a[2] = {a1, a2};
  const double b[2] = {b1, b2};
  Eigen::Vector2d best = Eigen::Vector2d::Constant(std::numeric_limits<double>::quiet_NaN());
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const Eigen::Vector2d foot = y - (a[i].dot(y) - b[i]) / a[i].squaredNorm() * a[i];
    const Eigen::Vector2d dir(-a[i][1] / a[i].norm(), a[i][0] / a[i].norm());
    const auto ok = [&](double t) { return a[j].dot(foot + t * dir) <= b[j]; };
    constexpr int kSteps = 20000;
    const double h = window / kSteps;
    double t_best = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k <= kSteps && std::isnan(t_best); ++k) {
      for (const double t : {k * h, -k * h}) {
        if (ok(t)) {
          t_best = t;
          break;
        }
      }
    }
    if (std::isnan(t_best)) {
      continue;
    }
    if (t_best != 0.0) {
      // feasible at t_best, infeasible one grid step closer to zero
      double lo = t_best > 0 ? t_best - h : t_best + h;
      double hi = t_best;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
          break;
        }
        (ok(mid) ? hi : lo) = mid;
      }
      t_best = hi;
    }
    const Eigen::Vector2d p = foot + t_best * dir;
    const double d = (p - y).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

}  // namespace oracle

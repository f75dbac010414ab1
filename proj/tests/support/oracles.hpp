#pragma once

// Reference computations that share no code with the library paths they
// check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "tgp/assembly.hpp"

namespace tgp::testing {

inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) { return a.exp(); }

/// Natural frequencies of trig mode j of the undamped Timoshenko beam
/// (phi ~ sin, psi ~ cos): K v = omega^2 R v with
/// K = [[k kappa^2, k kappa], [k kappa, b kappa^2 + k]], R = diag(rho1, rho2).
inline std::array<double, 2> timoshenko_frequencies(const PhysicalParams& p, int j) {
  const double kappa = j * M_PI / p.length;
  const double k11 = p.k * kappa * kappa / p.rho1;
  const double k22 = (p.b * kappa * kappa + p.k) / p.rho2;
  const double k12 = p.k * kappa / std::sqrt(p.rho1 * p.rho2);
  const double mean = 0.5 * (k11 + k22);
  const double disc = std::sqrt(0.25 * (k11 - k22) * (k11 - k22) + k12 * k12);
  return {std::sqrt(mean - disc), std::sqrt(mean + disc)};
}

/// Composite trapezoid rule with `pieces` panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int pieces) {
  const double h = (b - a) / pieces;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < pieces; ++i) s += f(a + i * h);
  return s * h;
}

/// Piecewise-linear interpolant of nodal values on a uniform grid over [0, L].
inline double p1_value(const Eigen::VectorXd& nodal, double length, double x) {
  const int cells = static_cast<int>(nodal.size()) - 1;
  const double h = length / cells;
  const int e = std::clamp(static_cast<int>(std::floor(x / h)), 0, cells - 1);
  const double t = x / h - e;
  return (1.0 - t) * nodal(e) + t * nodal(e + 1);
}

inline double p1_slope(const Eigen::VectorXd& nodal, double length, double x) {
  const int cells = static_cast<int>(nodal.size()) - 1;
  const double h = length / cells;
  const int e = std::clamp(static_cast<int>(std::floor(x / h)), 0, cells - 1);
  return (nodal(e + 1) - nodal(e)) / h;
}

/// ||A^{-1}|| in the metric of M, from an LU solve and a symmetric
/// eigensolve of C^T C with C = L^T A^{-1} L^{-T} (M = L L^T).
inline double inverse_norm_direct(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(m).matrixL();
  const Eigen::MatrixXd l_inv_t =
      l.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(l.rows(), l.cols()));
  const Eigen::MatrixXd c = l.transpose() * Eigen::FullPivLU<Eigen::MatrixXd>(a).solve(l_inv_t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.transpose() * c);
  return std::sqrt(es.eigenvalues().maxCoeff());
}

}  // namespace tgp::testing

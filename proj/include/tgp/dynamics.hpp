#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tgp/assembly.hpp"

namespace tgp {

/// Implicit midpoint rule (M - dt/2 A) u+ = (M + dt/2 A) u. The shifted
/// matrix is factored once; every step satisfies
/// E(u+) - E(u) = -dt * dissipation((u + u+) / 2) up to rounding.
/// A negative dt steps backwards in time.
class MidpointStepper {
 public:
  MidpointStepper(const SemidiscreteSystem& sys, double dt);

  Eigen::VectorXd step(const Eigen::VectorXd& state) const;
  double dt() const { return dt_; }

 private:
  const SemidiscreteSystem* sys_;
  double dt_;
  Eigen::MatrixXd lhs_;
  Eigen::MatrixXd rhs_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

Eigen::VectorXd step_midpoint(const SemidiscreteSystem& sys, const Eigen::VectorXd& state, double dt);

struct DecayFit {
  double rate = 0.0;  ///< omega, with E ~ exp(-2 omega t)
  std::size_t begin = 0;
  std::size_t end = 0;  ///< one past the last sample used
  double residual = 0.0;  ///< RMS of the log-energy fit
};

/// Least-squares slope of log E over the samples after the first
/// `transient_fraction` of the record; omega = -slope / 2. The window is cut
/// at the first non-positive energy. Throws FitError when fewer than 10
/// positive samples remain.
DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& energies,
                        double transient_fraction = 0.2);

struct TrajectoryReport {
  std::vector<double> times;
  std::vector<double> energies;
  /// dissipations[k] is evaluated at the midpoint of [t_k, t_{k+1}]; one
  /// entry fewer than `times`.
  std::vector<double> dissipations;
  std::optional<DecayFit> fit;  ///< empty when the energy vanishes identically

  double fitted_rate() const { return fit ? fit->rate : 0.0; }
};

struct SimulateOptions {
  double transient_fraction = 0.2;
  bool fit = true;
};

/// Advances `state0` to `t_final` with fixed steps of `dt` (the last step is
/// shortened to land on t_final). Throws SimulationError on non-finite values.
TrajectoryReport simulate(const SemidiscreteSystem& sys, const Eigen::VectorXd& state0, double dt, double t_final,
                          const SimulateOptions& opts = {});

/// Same as simulate(), also returning the final state.
TrajectoryReport simulate(const SemidiscreteSystem& sys, const Eigen::VectorXd& state0, double dt, double t_final,
                          const SimulateOptions& opts, Eigen::VectorXd& final_state);

}  // namespace tgp

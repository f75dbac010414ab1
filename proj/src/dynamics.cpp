#include "tgp/dynamics.hpp"

#include <cmath>
#include <string>

#include "tgp/errors.hpp"

namespace tgp {

MidpointStepper::MidpointStepper(const SemidiscreteSystem& sys, double dt) : sys_(&sys), dt_(dt) {
  if (dt == 0.0 || !std::isfinite(dt)) throw DomainError("time step must be finite and non-zero");
  lhs_ = sys.gram - 0.5 * dt * sys.generator;
  rhs_ = sys.gram + 0.5 * dt * sys.generator;
  lu_.compute(lhs_);
}

Eigen::VectorXd MidpointStepper::step(const Eigen::VectorXd& state) const {
  if (state.size() != sys_->dim()) throw ShapeError("state length does not match the system");
  const Eigen::VectorXd b = rhs_ * state;
  Eigen::VectorXd x = lu_.solve(b);
  // One refinement sweep keeps the solve residual, and with it the energy
  // balance defect, at the level of the rounding in b.
  x += lu_.solve(b - lhs_ * x);
  return x;
}

Eigen::VectorXd step_midpoint(const SemidiscreteSystem& sys, const Eigen::VectorXd& state, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be > 0");
  return MidpointStepper(sys, dt).step(state);
}

DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& energies,
                        double transient_fraction) {
  if (times.size() != energies.size()) throw ShapeError("times and energies differ in length");
  if (!(transient_fraction >= 0.0 && transient_fraction < 1.0)) {
    throw DomainError("transient fraction must lie in [0, 1)");
  }
  const std::size_t n = times.size();
  const auto begin = static_cast<std::size_t>(std::floor(transient_fraction * static_cast<double>(n)));
  std::size_t end = begin;
  while (end < n && energies[end] > 0.0 && std::isfinite(std::log(energies[end]))) ++end;
  if (end - begin < 10) throw FitError("decay rate undefined: fewer than 10 positive energies in the fit window");

  const double count = static_cast<double>(end - begin);
  double mt = 0.0, my = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    mt += times[i];
    my += std::log(energies[i]);
  }
  mt /= count;
  my /= count;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double dt = times[i] - mt;
    stt += dt * dt;
    sty += dt * (std::log(energies[i]) - my);
  }
  if (!(stt > 0.0)) throw FitError("decay rate undefined: fit window spans no time");
  const double slope = sty / stt;
  double ss = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double r = std::log(energies[i]) - (my + slope * (times[i] - mt));
    ss += r * r;
  }
  return DecayFit{.rate = -0.5 * slope, .begin = begin, .end = end, .residual = std::sqrt(ss / count)};
}

TrajectoryReport simulate(const SemidiscreteSystem& sys, const Eigen::VectorXd& state0, double dt, double t_final,
                          const SimulateOptions& opts, Eigen::VectorXd& final_state) {
  if (!(dt > 0.0)) throw DomainError("time step must be > 0");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw DomainError("final time must be > 0");
  const MidpointStepper stepper(sys, dt);
  const auto full_steps = static_cast<long>(std::floor(t_final / dt * (1.0 + 1e-12)));
  const double tail = t_final - static_cast<double>(full_steps) * dt;

  TrajectoryReport report;
  report.times.reserve(static_cast<std::size_t>(full_steps) + 2);
  report.energies.reserve(report.times.capacity());
  report.dissipations.reserve(report.times.capacity());

  Eigen::VectorXd u = state0;
  double t = 0.0;
  report.times.push_back(t);
  report.energies.push_back(energy(sys, u));

  auto advance = [&](const MidpointStepper& s, long index) {
    Eigen::VectorXd next = s.step(u);
    if (!next.allFinite()) {
      throw SimulationError("non-finite state after step " + std::to_string(index) + " at t = " + std::to_string(t));
    }
    report.dissipations.push_back(dissipation(sys, 0.5 * (u + next)));
    u = std::move(next);
    t += s.dt();
    report.times.push_back(t);
    report.energies.push_back(energy(sys, u));
  };

  for (long i = 0; i < full_steps; ++i) advance(stepper, i);
  if (tail > 1e-12 * t_final) advance(MidpointStepper(sys, tail), full_steps);

  if (opts.fit && report.energies.front() > 0.0) {
    report.fit = fit_decay_rate(report.times, report.energies, opts.transient_fraction);
  }
  final_state = std::move(u);
  return report;
}

TrajectoryReport simulate(const SemidiscreteSystem& sys, const Eigen::VectorXd& state0, double dt, double t_final,
                          const SimulateOptions& opts) {
  Eigen::VectorXd final_state;
  return simulate(sys, state0, dt, t_final, opts, final_state);
}

}  // namespace tgp
